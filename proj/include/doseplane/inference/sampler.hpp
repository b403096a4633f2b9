#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doseplane/inference/priors.hpp"
#include "doseplane/model/params.hpp"
#include "doseplane/model/trial_data.hpp"

namespace doseplane::inference {

struct McmcConfig {
    int iterations = 6000;
    int burn_in = 1500;
    int thin = 1;
    int chains = 1;
    double target_acceptance = 0.35;
    std::uint64_t seed = 1;
    int threads = 1;  ///< chains run concurrently when > 1; output does not depend on it

    /// 1 chain, 6000 iterations, 1500 burn-in.
    static McmcConfig simulation() { return {}; }
    /// 4 chains, 20000 iterations, 5000 burn-in.
    static McmcConfig conduct() { return {20000, 5000, 1, 4, 0.35, 1, 1}; }

    int retained_per_chain() const noexcept { return (iterations - burn_in) / thin; }
    void validate() const;
    bool operator==(const McmcConfig&) const = default;
};

enum class ModelKind { toxicity, efficacy };
std::string_view to_string(ModelKind k) noexcept;

/// Retained draws, column-major, chains concatenated in order.
///
/// Toxicity columns: rho00, rho10, rho01, alpha3 (clinical) followed by the derived
/// natural-scale alpha0, alpha1, alpha2. Efficacy columns: beta0..beta5.
class PosteriorDraws {
  public:
    static constexpr std::size_t kToxPrimary = 4;
    static constexpr std::size_t kEffPrimary = 6;
    enum ToxColumn : std::size_t { rho00 = 0, rho10, rho01, alpha3, alpha0, alpha1, alpha2 };

    PosteriorDraws() = default;
    PosteriorDraws(ModelKind kind, std::size_t chains);

    /// Draw sets assembled directly from parameter points (single pseudo-chain).
    static PosteriorDraws from_toxicity(const std::vector<model::ToxicityParamsClinical>& points);
    static PosteriorDraws from_efficacy(const std::vector<model::EfficacyParams>& points);

    ModelKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return columns_.empty() ? 0 : columns_[0].size(); }
    bool empty() const noexcept { return size() == 0; }
    std::size_t chains() const noexcept { return chains_; }
    std::size_t primary_count() const noexcept;
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::vector<double>& column(std::size_t i) const { return columns_.at(i); }

    model::ToxicityParamsClinical tox_draw(std::size_t i) const;
    model::EfficacyParams eff_draw(std::size_t i) const;

    /// Post-burn-in acceptance rate per primary coordinate, averaged over chains.
    const std::vector<double>& acceptance() const noexcept { return acceptance_; }
    /// Largest split-R-hat across primary parameters on the sampler's unconstrained scale
    /// (NaN when fewer than 4 draws per chain).
    double max_split_rhat() const noexcept { return max_split_rhat_; }

    /// Header row of column names, then one row per draw.
    void write_csv(std::ostream& os) const;

  private:
    friend PosteriorDraws sample_posterior(ModelKind, const model::TrialData&, const McmcConfig&,
                                           const ToxPriorSpec&, const EffPriorSpec&);
    void append_tox(const model::ToxicityParamsClinical& p);
    void append_eff(const model::EfficacyParams& b);

    ModelKind kind_ = ModelKind::toxicity;
    std::size_t chains_ = 0;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    std::vector<double> acceptance_;
    double max_split_rhat_ = 0.0;
};

/// Adaptive random-walk Metropolis, one coordinate at a time, on the unconstrained scale
/// (logit for rho01, rho10 and u = rho00 / min(rho01, rho10); log for alpha3 and beta1..3;
/// identity for beta0, beta4, beta5), with the log-Jacobian added to the target.
/// Proposal scales follow a Robbins-Monro recursion toward `target_acceptance` during
/// burn-in and are frozen afterwards. Deterministic in (data, config minus threads).
/// Throws InitializationError when no finite starting point is found in 100 attempts.
PosteriorDraws sample_posterior(ModelKind kind, const model::TrialData& data, const McmcConfig& config,
                                const ToxPriorSpec& tox_prior = {}, const EffPriorSpec& eff_prior = {});

/// Split-R-hat of equal-length chains.
double split_rhat(const std::vector<std::vector<double>>& chains);

}  // namespace doseplane::inference
