#include "doseplane/inference/sampler.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>

#include "doseplane/errors.hpp"
#include "doseplane/inference/posterior.hpp"
#include "doseplane/util/random.hpp"

namespace doseplane::inference {

using model::EfficacyParams;
using model::ToxicityParamsClinical;

void McmcConfig::validate() const {
    if (iterations < 1) throw InputError("iterations", "must be positive");
    if (burn_in < 0 || burn_in >= iterations) throw InputError("burn_in", "must satisfy 0 <= burn_in < iterations");
    if (thin < 1) throw InputError("thin", "must be at least 1");
    if (chains < 1) throw InputError("chains", "must be positive");
    if (!(target_acceptance > 0.0 && target_acceptance < 1.0)) {
        throw InputError("target_acceptance", "must lie strictly between 0 and 1");
    }
    if (threads < 1) throw InputError("threads", "must be positive");
    if (retained_per_chain() < 1) throw InputError("thin", "no draws retained after burn-in");
}

std::string_view to_string(ModelKind k) noexcept { return k == ModelKind::toxicity ? "toxicity" : "efficacy"; }

// ---------------------------------------------------------------------------------------
// PosteriorDraws

PosteriorDraws::PosteriorDraws(ModelKind kind, std::size_t chains) : kind_(kind), chains_(chains) {
    if (kind == ModelKind::toxicity) {
        names_ = {"rho00", "rho10", "rho01", "alpha3", "alpha0", "alpha1", "alpha2"};
    } else {
        names_ = {"beta0", "beta1", "beta2", "beta3", "beta4", "beta5"};
    }
    columns_.resize(names_.size());
}

std::size_t PosteriorDraws::primary_count() const noexcept {
    return kind_ == ModelKind::toxicity ? kToxPrimary : kEffPrimary;
}

void PosteriorDraws::append_tox(const ToxicityParamsClinical& p) {
    const auto n = model::to_natural(p);
    const double row[] = {p.rho00, p.rho10, p.rho01, p.alpha3, n.alpha0, n.alpha1, n.alpha2};
    for (std::size_t i = 0; i < 7; ++i) columns_[i].push_back(row[i]);
}

void PosteriorDraws::append_eff(const EfficacyParams& b) {
    for (std::size_t i = 0; i < 6; ++i) columns_[i].push_back(b.beta[i]);
}

PosteriorDraws PosteriorDraws::from_toxicity(const std::vector<ToxicityParamsClinical>& points) {
    PosteriorDraws d(ModelKind::toxicity, 1);
    for (const auto& p : points) d.append_tox(p);
    return d;
}

PosteriorDraws PosteriorDraws::from_efficacy(const std::vector<EfficacyParams>& points) {
    PosteriorDraws d(ModelKind::efficacy, 1);
    for (const auto& b : points) {
        b.validate();
        d.append_eff(b);
    }
    return d;
}

ToxicityParamsClinical PosteriorDraws::tox_draw(std::size_t i) const {
    if (kind_ != ModelKind::toxicity) throw StateError("tox_draw on efficacy draws");
    return {columns_[rho00].at(i), columns_[rho10].at(i), columns_[rho01].at(i), columns_[alpha3].at(i)};
}

EfficacyParams PosteriorDraws::eff_draw(std::size_t i) const {
    if (kind_ != ModelKind::efficacy) throw StateError("eff_draw on toxicity draws");
    EfficacyParams b;
    for (std::size_t k = 0; k < 6; ++k) b.beta[k] = columns_[k].at(i);
    return b;
}

void PosteriorDraws::write_csv(std::ostream& os) const {
    const auto old_precision = os.precision(17);
    for (std::size_t k = 0; k < names_.size(); ++k) os << (k ? "," : "") << names_[k];
    os << '\n';
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t k = 0; k < columns_.size(); ++k) os << (k ? "," : "") << columns_[k][i];
        os << '\n';
    }
    os.precision(old_precision);
}

// ---------------------------------------------------------------------------------------
// Targets on the unconstrained scale

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logistic(double v) noexcept {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
}

double logit(double p) noexcept { return std::log(p) - std::log1p(-p); }

// log(s (1 - s)) for s = logistic(v)
double log_logistic_jacobian(double v) noexcept {
    const double a = std::abs(v);
    return -a - 2.0 * std::log1p(std::exp(-a));
}

class ToxTarget {
  public:
    static constexpr std::size_t kDim = 4;

    ToxTarget(const model::TrialData& data, const ToxPriorSpec& prior) : lik_(data), prior_(prior) {}

    static std::array<double, kDim> start() { return {logit(0.3), logit(0.3), logit(0.3), 0.0}; }

    // coordinates: logit rho01, logit rho10, logit u, log alpha3
    static ToxicityParamsClinical params(const double* xi) noexcept {
        const double r01 = logistic(xi[0]);
        const double r10 = logistic(xi[1]);
        const double u = logistic(xi[2]);
        return {u * std::min(r01, r10), r10, r01, std::exp(xi[3])};
    }

    double log_target(const double* xi) const {
        const auto p = params(xi);
        if (!p.valid()) return kNegInf;
        const double lp = log_post_tox(p, lik_, prior_);
        if (!std::isfinite(lp)) return kNegInf;
        return lp + log_logistic_jacobian(xi[0]) + log_logistic_jacobian(xi[1]) + log_logistic_jacobian(xi[2]) +
               std::log(std::min(p.rho01, p.rho10)) + xi[3];
    }

  private:
    ToxicityLikelihood lik_;
    ToxPriorSpec prior_;
};

class EffTarget {
  public:
    static constexpr std::size_t kDim = 6;

    EffTarget(const model::TrialData& data, const EffPriorSpec& prior) : lik_(data), prior_(prior) {}

    static std::array<double, kDim> start() { return {-1.5, 0.0, 0.0, 0.0, 0.0, 0.0}; }

    // coordinates: beta0, log beta1, log beta2, log beta3, beta4, beta5
    static EfficacyParams params(const double* xi) noexcept {
        return {{xi[0], std::exp(xi[1]), std::exp(xi[2]), std::exp(xi[3]), xi[4], xi[5]}};
    }

    double log_target(const double* xi) const {
        const auto b = params(xi);
        const double lp = log_post_eff(b, lik_, prior_);
        if (!std::isfinite(lp)) return kNegInf;
        return lp + xi[1] + xi[2] + xi[3];
    }

  private:
    EfficacyLikelihood lik_;
    EffPriorSpec prior_;
};

struct ChainOutput {
    std::vector<std::vector<double>> xi;  // per coordinate
    std::vector<double> acceptance;       // per coordinate, post burn-in
};

template <class Target>
ChainOutput run_chain(const Target& target, const McmcConfig& cfg, std::uint64_t seed, bool jitter) {
    constexpr std::size_t D = Target::kDim;
    util::Rng rng(seed);

    std::array<double, D> cur = Target::start();
    if (jitter) {
        for (auto& v : cur) v += 0.5 * rng.normal();
    }
    double cur_lp = target.log_target(cur.data());
    for (int attempt = 0; !std::isfinite(cur_lp); ++attempt) {
        if (attempt == 100) throw InitializationError("sample_posterior: no finite log-posterior after 100 starts");
        cur = Target::start();
        for (auto& v : cur) v += rng.normal();
        cur_lp = target.log_target(cur.data());
    }

    std::array<double, D> log_step{};
    log_step.fill(0.0);
    std::array<long, D> accepted{};
    const auto retained = static_cast<std::size_t>(cfg.retained_per_chain());

    ChainOutput out;
    out.xi.assign(D, {});
    for (auto& c : out.xi) c.reserve(retained);

    for (int t = 0; t < cfg.iterations; ++t) {
        const bool burning = t < cfg.burn_in;
        const double gain = burning ? std::pow(static_cast<double>(t) + 1.0, -0.6) : 0.0;
        for (std::size_t k = 0; k < D; ++k) {
            const double old = cur[k];
            cur[k] = old + std::exp(log_step[k]) * rng.normal();
            const double prop_lp = target.log_target(cur.data());
            const double log_u = std::log(rng.uniform());
            const bool accept = std::isfinite(prop_lp) && log_u < prop_lp - cur_lp;
            if (accept) {
                cur_lp = prop_lp;
            } else {
                cur[k] = old;
            }
            if (burning) {
                log_step[k] += gain * ((accept ? 1.0 : 0.0) - cfg.target_acceptance);
                log_step[k] = std::clamp(log_step[k], -12.0, 4.0);
            } else if (accept) {
                ++accepted[k];
            }
        }
        if (!burning && (t - cfg.burn_in + 1) % cfg.thin == 0) {
            for (std::size_t k = 0; k < D; ++k) out.xi[k].push_back(cur[k]);
        }
    }
    const double post = static_cast<double>(cfg.iterations - cfg.burn_in);
    for (std::size_t k = 0; k < D; ++k) out.acceptance.push_back(static_cast<double>(accepted[k]) / post);
    return out;
}

template <class Target>
std::vector<ChainOutput> run_chains(const Target& target, const McmcConfig& cfg) {
    const auto n = static_cast<std::size_t>(cfg.chains);
    std::vector<ChainOutput> outs(n);
    auto job = [&](std::size_t c) {
        outs[c] = run_chain(target, cfg, util::derive_seed(cfg.seed, util::stream::chain, c), c > 0);
    };
    const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(cfg.threads));
    if (workers <= 1) {
        for (std::size_t c = 0; c < n; ++c) job(c);
        return outs;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t c = next++; c < n; c = next++) job(c);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return outs;
}

double max_rhat(const std::vector<ChainOutput>& outs, std::size_t dim) {
    double worst = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        std::vector<std::vector<double>> per_chain;
        for (const auto& o : outs) per_chain.push_back(o.xi[k]);
        const double r = split_rhat(per_chain);
        if (std::isnan(r)) return r;
        worst = std::max(worst, r);
    }
    return worst;
}

}  // namespace

double split_rhat(const std::vector<std::vector<double>>& chains) {
    std::vector<std::pair<const double*, std::size_t>> halves;
    std::size_t len = std::numeric_limits<std::size_t>::max();
    for (const auto& c : chains) len = std::min(len, c.size() / 2);
    if (chains.empty() || len < 2) return std::numeric_limits<double>::quiet_NaN();
    for (const auto& c : chains) {
        halves.emplace_back(c.data(), len);
        halves.emplace_back(c.data() + (c.size() - len), len);
    }
    const auto m = static_cast<double>(halves.size());
    const auto n = static_cast<double>(len);
    std::vector<double> means;
    double within = 0.0;
    for (const auto& [ptr, cnt] : halves) {
        double mean = 0.0;
        for (std::size_t i = 0; i < cnt; ++i) mean += ptr[i];
        mean /= n;
        double ss = 0.0;
        for (std::size_t i = 0; i < cnt; ++i) ss += (ptr[i] - mean) * (ptr[i] - mean);
        within += ss / (n - 1.0);
        means.push_back(mean);
    }
    within /= m;
    double grand = 0.0;
    for (double v : means) grand += v;
    grand /= m;
    double between = 0.0;
    for (double v : means) between += (v - grand) * (v - grand);
    between *= n / (m - 1.0);
    if (within <= 0.0) return between <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    const double var_plus = (n - 1.0) / n * within + between / n;
    return std::sqrt(var_plus / within);
}

PosteriorDraws sample_posterior(ModelKind kind, const model::TrialData& data, const McmcConfig& config,
                                const ToxPriorSpec& tox_prior, const EffPriorSpec& eff_prior) {
    config.validate();
    PosteriorDraws draws(kind, static_cast<std::size_t>(config.chains));
    std::vector<ChainOutput> outs;
    if (kind == ModelKind::toxicity) {
        tox_prior.validate();
        const ToxTarget target(data, tox_prior);
        outs = run_chains(target, config);
        for (const auto& o : outs) {
            for (std::size_t i = 0; i < o.xi[0].size(); ++i) {
                const double xi[] = {o.xi[0][i], o.xi[1][i], o.xi[2][i], o.xi[3][i]};
                draws.append_tox(ToxTarget::params(xi));
            }
        }
        draws.max_split_rhat_ = max_rhat(outs, ToxTarget::kDim);
    } else {
        eff_prior.validate();
        const EffTarget target(data, eff_prior);
        outs = run_chains(target, config);
        for (const auto& o : outs) {
            for (std::size_t i = 0; i < o.xi[0].size(); ++i) {
                double xi[6];
                for (std::size_t k = 0; k < 6; ++k) xi[k] = o.xi[k][i];
                draws.append_eff(EffTarget::params(xi));
            }
        }
        draws.max_split_rhat_ = max_rhat(outs, EffTarget::kDim);
    }
    const std::size_t dim = draws.primary_count();
    draws.acceptance_.assign(dim, 0.0);
    for (const auto& o : outs) {
        for (std::size_t k = 0; k < dim; ++k) draws.acceptance_[k] += o.acceptance[k] / static_cast<double>(outs.size());
    }
    return draws;
}

}  // namespace doseplane::inference
