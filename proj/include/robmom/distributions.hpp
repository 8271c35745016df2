#pragma once

// Parametric families, quantile averages and the gamma-congruence analyzer.

#include <algorithm>
#include <array>
#include <cfloat>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "robmom/error.hpp"
#include "robmom/numeric.hpp"

namespace robmom {

enum class FamilyKind { Weibull, Pareto, Lognormal, Gamma, GeneralizedGaussian, Uniform };

/// A parametric distribution. Parameters are addressed by name:
///   weibull     alpha (shape), lambda (scale)
///   pareto      alpha (shape), xm (scale)
///   lognormal   mu, sigma (log-location, log-scale)
///   gamma       shape, scale
///   gengauss    mu, sigma (standard deviation), beta (shape; 2 normal, 1 Laplace)
///   uniform     a, b
class Family {
public:
    static Family weibull(double alpha, double lambda) { return Family(FamilyKind::Weibull, {alpha, lambda, 0}, "weibull"); }
    static Family pareto(double alpha, double xm) { return Family(FamilyKind::Pareto, {alpha, xm, 0}, "pareto"); }
    static Family lognormal(double mu, double sigma) { return Family(FamilyKind::Lognormal, {mu, sigma, 0}, "lognormal"); }
    static Family gamma(double shape, double scale) { return Family(FamilyKind::Gamma, {shape, scale, 0}, "gamma"); }
    static Family generalized_gaussian(double mu, double sigma, double beta)
    {
        return Family(FamilyKind::GeneralizedGaussian, {mu, sigma, beta}, "gengauss");
    }
    static Family normal(double mu, double sigma)
    {
        return Family(FamilyKind::GeneralizedGaussian, {mu, sigma, 2.0}, "normal");
    }
    /// Laplace with location mu and scale b (standard deviation b*sqrt(2)).
    static Family laplace(double mu, double b)
    {
        return Family(FamilyKind::GeneralizedGaussian, {mu, b * std::numbers::sqrt2, 1.0}, "laplace");
    }
    static Family uniform(double a, double b) { return Family(FamilyKind::Uniform, {a, b, 0}, "uniform"); }

    FamilyKind kind() const noexcept { return kind_; }
    const std::string& label() const noexcept { return label_; }

    std::span<const std::string_view> param_names() const noexcept
    {
        static constexpr std::string_view weib[] = {"alpha", "lambda"};
        static constexpr std::string_view par[] = {"alpha", "xm"};
        static constexpr std::string_view logn[] = {"mu", "sigma"};
        static constexpr std::string_view gam[] = {"shape", "scale"};
        static constexpr std::string_view gg[] = {"mu", "sigma", "beta"};
        static constexpr std::string_view uni[] = {"a", "b"};
        switch (kind_) {
        case FamilyKind::Weibull: return weib;
        case FamilyKind::Pareto: return par;
        case FamilyKind::Lognormal: return logn;
        case FamilyKind::Gamma: return gam;
        case FamilyKind::GeneralizedGaussian: return gg;
        case FamilyKind::Uniform: return uni;
        }
        return {};
    }

    double param(std::string_view name) const { return p_[index_of(name)]; }
    double param(std::size_t i) const noexcept { return p_[i]; }

    /// Copy with one parameter replaced; validates the result.
    Family with_param(std::string_view name, double value) const
    {
        Family f = *this;
        f.p_[index_of(name)] = value;
        f.validate();
        return f;
    }

    bool is_symmetric() const noexcept { return kind_ == FamilyKind::GeneralizedGaussian || kind_ == FamilyKind::Uniform; }

    /// "name:p1=v1,p2=v2" with round-trippable numbers.
    std::string describe() const
    {
        std::string s = label_ + ":";
        const auto names = param_names();
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) s += ",";
            s += std::string(names[i]) + "=" + format_double(p_[i]);
        }
        return s;
    }

    friend bool operator==(const Family& a, const Family& b) noexcept { return a.kind_ == b.kind_ && a.p_ == b.p_; }

    /// GeneralizedGaussian scale alpha giving standard deviation sigma.
    double gg_alpha() const
    {
        const double beta = p_[2];
        return p_[1] * std::sqrt(std::tgamma(1.0 / beta) / std::tgamma(3.0 / beta));
    }

    static std::string format_double(double v)
    {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }

private:
    Family(FamilyKind kind, std::array<double, 3> p, std::string label) : kind_(kind), p_(p), label_(std::move(label))
    {
        validate();
    }

    std::size_t index_of(std::string_view name) const
    {
        const auto names = param_names();
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        throw ParseError("family " + label_ + " has no parameter '" + std::string(name) + "'");
    }

    void validate() const
    {
        for (double v : p_)
            if (!std::isfinite(v)) throw ArgumentError(label_ + ": parameters must be finite");
        auto positive = [&](double v, const char* what) {
            if (!(v > 0.0)) throw ArgumentError(label_ + ": " + what + " must be positive");
        };
        switch (kind_) {
        case FamilyKind::Weibull:
        case FamilyKind::Pareto:
        case FamilyKind::Gamma:
            positive(p_[0], "shape");
            positive(p_[1], "scale");
            break;
        case FamilyKind::Lognormal: positive(p_[1], "sigma"); break;
        case FamilyKind::GeneralizedGaussian:
            positive(p_[1], "sigma");
            positive(p_[2], "beta");
            break;
        case FamilyKind::Uniform:
            if (!(p_[0] < p_[1])) throw ArgumentError("uniform: a must be below b");
            break;
        }
    }

    FamilyKind kind_;
    std::array<double, 3> p_;
    std::string label_;
};

/// Parses "name" or "name:key=value,...". Unlisted parameters keep their
/// defaults: weibull(1,1), pareto(3,1), lognormal(0,1), gamma(3,1),
/// gengauss(0,1,2), normal(0,1), laplace(0, b=1), uniform(0,1).
inline Family parse_family(std::string_view spec)
{
    const auto colon = spec.find(':');
    const std::string name(spec.substr(0, colon));
    Family f = [&] {
        if (name == "weibull") return Family::weibull(1, 1);
        if (name == "pareto") return Family::pareto(3, 1);
        if (name == "lognormal") return Family::lognormal(0, 1);
        if (name == "gamma") return Family::gamma(3, 1);
        if (name == "gengauss") return Family::generalized_gaussian(0, 1, 2);
        if (name == "normal") return Family::normal(0, 1);
        if (name == "laplace") return Family::laplace(0, 1);
        if (name == "uniform") return Family::uniform(0, 1);
        throw ParseError("unknown family '" + name + "'");
    }();
    if (colon == std::string_view::npos) return f;
    std::string_view rest = spec.substr(colon + 1);
    // Uniform bounds are applied together so a narrowing edit never passes
    // through an invalid a >= b state.
    std::vector<std::pair<std::string, double>> assignments;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key=value in family spec, got '" + std::string(item) + "'");
        const std::string_view key = item.substr(0, eq);
        const std::string_view val = item.substr(eq + 1);
        double v = 0;
        const auto res = std::from_chars(val.data(), val.data() + val.size(), v);
        if (res.ec != std::errc() || res.ptr != val.data() + val.size())
            throw ParseError("bad number '" + std::string(val) + "' in family spec");
        assignments.emplace_back(std::string(key), v);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (f.kind() == FamilyKind::Uniform) {
        double a = f.param("a"), b = f.param("b");
        for (const auto& [key, v] : assignments) {
            if (key == "a") a = v;
            else if (key == "b") b = v;
            else throw ParseError("family uniform has no parameter '" + key + "'");
        }
        return Family::uniform(a, b);
    }
    for (const auto& [key, v] : assignments) f = f.with_param(key, v);
    return f;
}

// ---------------------------------------------------------------------------
// Quantile, distribution and density functions
// ---------------------------------------------------------------------------

inline double quantile(const Family& f, double p)
{
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("quantile probability must lie in (0, 1)");
    switch (f.kind()) {
    case FamilyKind::Weibull: return f.param(1) * std::pow(-std::log1p(-p), 1.0 / f.param(0));
    case FamilyKind::Pareto: return f.param(1) * std::pow(1.0 - p, -1.0 / f.param(0));
    case FamilyKind::Lognormal:
        return std::exp(f.param(0) - std::numbers::sqrt2 * f.param(1) * boost::math::erfc_inv(2.0 * p));
    case FamilyKind::Gamma: return f.param(1) * boost::math::gamma_p_inv(f.param(0), p);
    case FamilyKind::GeneralizedGaussian: {
        const double mu = f.param(0), beta = f.param(2), alpha = f.gg_alpha();
        const double q = std::abs(2.0 * p - 1.0);
        const double sign = p < 0.5 ? -1.0 : 1.0;
        if (q == 0.0) return mu;
        double z;
        if (beta == 2.0) z = boost::math::erf_inv(q);
        else if (beta == 1.0) z = -std::log1p(-q);
        else z = std::pow(boost::math::gamma_p_inv(1.0 / beta, q), 1.0 / beta);
        return mu + sign * alpha * z;
    }
    case FamilyKind::Uniform: return f.param(0) + p * (f.param(1) - f.param(0));
    }
    throw ArgumentError("unknown family");
}

inline double cdf(const Family& f, double x)
{
    switch (f.kind()) {
    case FamilyKind::Weibull:
        return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / f.param(1), f.param(0)));
    case FamilyKind::Pareto: return x <= f.param(1) ? 0.0 : 1.0 - std::pow(f.param(1) / x, f.param(0));
    case FamilyKind::Lognormal:
        return x <= 0.0 ? 0.0 : 0.5 * std::erfc(-(std::log(x) - f.param(0)) / (f.param(1) * std::numbers::sqrt2));
    case FamilyKind::Gamma: return x <= 0.0 ? 0.0 : boost::math::gamma_p(f.param(0), x / f.param(1));
    case FamilyKind::GeneralizedGaussian: {
        const double d = x - f.param(0), beta = f.param(2);
        const double half = 0.5 * boost::math::gamma_p(1.0 / beta, std::pow(std::abs(d) / f.gg_alpha(), beta));
        return d < 0 ? 0.5 - half : 0.5 + half;
    }
    case FamilyKind::Uniform:
        return std::clamp((x - f.param(0)) / (f.param(1) - f.param(0)), 0.0, 1.0);
    }
    throw ArgumentError("unknown family");
}

inline double pdf(const Family& f, double x)
{
    switch (f.kind()) {
    case FamilyKind::Weibull: {
        if (x < 0.0) return 0.0;
        const double a = f.param(0), l = f.param(1), z = x / l;
        return a / l * std::pow(z, a - 1.0) * std::exp(-std::pow(z, a));
    }
    case FamilyKind::Pareto:
        return x < f.param(1) ? 0.0 : f.param(0) * std::pow(f.param(1), f.param(0)) / std::pow(x, f.param(0) + 1.0);
    case FamilyKind::Lognormal: {
        if (x <= 0.0) return 0.0;
        const double z = (std::log(x) - f.param(0)) / f.param(1);
        return std::exp(-0.5 * z * z) / (x * f.param(1) * std::sqrt(2.0 * std::numbers::pi));
    }
    case FamilyKind::Gamma:
        return x < 0.0 ? 0.0 : boost::math::gamma_p_derivative(f.param(0), x / f.param(1)) / f.param(1);
    case FamilyKind::GeneralizedGaussian: {
        const double beta = f.param(2), alpha = f.gg_alpha();
        return beta / (2.0 * alpha * std::tgamma(1.0 / beta))
               * std::exp(-std::pow(std::abs(x - f.param(0)) / alpha, beta));
    }
    case FamilyKind::Uniform:
        return (x < f.param(0) || x > f.param(1)) ? 0.0 : 1.0 / (f.param(1) - f.param(0));
    }
    throw ArgumentError("unknown family");
}

/// Tag for a population moment that does not exist (diverges).
struct InfiniteMoment {
    friend bool operator==(InfiniteMoment, InfiniteMoment) = default;
};
using MeanValue = std::variant<double, InfiniteMoment>;

inline MeanValue family_mean(const Family& f)
{
    switch (f.kind()) {
    case FamilyKind::Weibull: return f.param(1) * std::tgamma(1.0 + 1.0 / f.param(0));
    case FamilyKind::Pareto:
        if (f.param(0) <= 1.0) return InfiniteMoment{};
        return f.param(0) * f.param(1) / (f.param(0) - 1.0);
    case FamilyKind::Lognormal: return std::exp(f.param(0) + 0.5 * f.param(1) * f.param(1));
    case FamilyKind::Gamma: return f.param(0) * f.param(1);
    case FamilyKind::GeneralizedGaussian: return f.param(0);
    case FamilyKind::Uniform: return 0.5 * (f.param(0) + f.param(1));
    }
    throw ArgumentError("unknown family");
}

inline double family_median(const Family& f) { return quantile(f, 0.5); }

/// n i.i.d. draws by inverse-transform sampling. Draw i comes from substream
/// (seed, i / kSampleBlock), so sample(f, m, s) is a prefix of sample(f, n, s)
/// for m < n.
inline constexpr std::size_t kSampleBlock = 8192;

inline std::vector<double> sample(const Family& f, std::size_t n, std::uint64_t seed, unsigned workers = 1)
{
    std::vector<double> out(n);
    const std::uint64_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
    for_each_block(blocks, workers, [&](std::uint64_t b) {
        auto eng = substream(seed, b);
        const std::size_t end = std::min(n, static_cast<std::size_t>((b + 1) * kSampleBlock));
        for (std::size_t i = b * kSampleBlock; i < end; ++i) out[i] = quantile(f, uniform_open01(eng));
    });
    return out;
}

// ---------------------------------------------------------------------------
// Quantile averages and congruence
// ---------------------------------------------------------------------------

/// QA(eps, gamma) = (Q(gamma*eps) + Q(1-eps)) / 2.
inline double quantile_average(const Family& f, double eps, double gamma)
{
    const double lo = gamma * eps, hi = 1.0 - eps;
    if (!(lo > 0.0 && lo < 1.0) || !(hi > 0.0 && hi < 1.0))
        throw ArgumentError("quantile average needs 0 < gamma*eps < 1 and 0 < 1-eps < 1");
    return 0.5 * (quantile(f, lo) + quantile(f, hi));
}

struct QaPartial {
    double derivative = 0.0;
    double noise_floor = 0.0; // |derivative| below this is reported as sign 0
    int sign = 0;
};

inline constexpr double kSignDeadBand = 1e-12;

inline double default_fd_step(double theta) { return std::max(1e-6, 1e-4 * std::abs(theta)); }

/// Central-difference estimate of dQA/d(param). The dead band is the larger
/// of 1e-12 and the rounding floor of the difference quotient,
/// 64 * DBL_EPSILON * max|Q| / h.
inline QaPartial qa_partial(const Family& f, std::string_view param, double eps, double gamma, double h = 0.0)
{
    const double theta = f.param(param);
    if (h <= 0.0) h = default_fd_step(theta);
    const Family up = f.with_param(param, theta + h);
    const Family down = f.with_param(param, theta - h);
    const double lo = gamma * eps, hi = 1.0 - eps;
    if (!(lo > 0.0 && lo < 1.0) || !(hi > 0.0 && hi < 1.0))
        throw ArgumentError("quantile average needs 0 < gamma*eps < 1 and 0 < 1-eps < 1");
    const double qu_lo = quantile(up, lo), qu_hi = quantile(up, hi);
    const double qd_lo = quantile(down, lo), qd_hi = quantile(down, hi);
    QaPartial out;
    out.derivative = (0.5 * (qu_lo + qu_hi) - 0.5 * (qd_lo + qd_hi)) / (2.0 * h);
    const double scale = std::max({std::abs(qu_lo), std::abs(qu_hi), std::abs(qd_lo), std::abs(qd_hi)});
    out.noise_floor = std::max(kSignDeadBand, 64.0 * DBL_EPSILON * scale / h);
    if (!std::isfinite(out.derivative)) throw ArgumentError("quantile average derivative is not finite");
    out.sign = std::abs(out.derivative) < out.noise_floor ? 0 : (out.derivative > 0 ? 1 : -1);
    return out;
}

inline int qa_partial_sign(const Family& f, std::string_view param, double eps, double gamma, double h = 0.0)
{
    return qa_partial(f, param, eps, gamma, h).sign;
}

/// Closed-form dQA/dsigma for the lognormal family:
///   (1/2) (-sqrt2 a Q(gamma eps) - sqrt2 b Q(1-eps)),
/// a = erfc^{-1}(2 gamma eps), b = erfc^{-1}(2 (1-eps)).
inline double lognormal_qa_dsigma(const Family& f, double eps, double gamma)
{
    if (f.kind() != FamilyKind::Lognormal) throw ArgumentError("lognormal_qa_dsigma needs a lognormal family");
    const double lo = gamma * eps, hi = 1.0 - eps;
    if (!(lo > 0.0 && lo < 1.0) || !(hi > 0.0 && hi < 1.0))
        throw ArgumentError("quantile average needs 0 < gamma*eps < 1 and 0 < 1-eps < 1");
    const double a = boost::math::erfc_inv(2.0 * lo);
    const double b = boost::math::erfc_inv(2.0 * hi);
    return 0.5 * (-std::numbers::sqrt2 * a * quantile(f, lo) - std::numbers::sqrt2 * b * quantile(f, hi));
}

inline constexpr double kGridGuard = 1e-4;
inline constexpr std::size_t kDefaultGridSize = 64;

/// Geometric grid from `guard` up to and including 1/(1+gamma).
inline std::vector<double> congruence_grid(double gamma, std::size_t size = kDefaultGridSize, double guard = kGridGuard)
{
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ArgumentError("congruence analysis needs gamma > 0");
    if (size < 2) throw ArgumentError("grid needs at least two points");
    const double top = 1.0 / (1.0 + gamma);
    if (!(guard > 0.0 && guard < top)) throw ArgumentError("grid guard must lie in (0, 1/(1+gamma))");
    std::vector<double> g(size);
    const double ratio = std::log(top / guard) / static_cast<double>(size - 1);
    for (std::size_t i = 0; i < size; ++i) g[i] = guard * std::exp(ratio * static_cast<double>(i));
    g.back() = top;
    return g;
}

enum class Congruence { Congruent, NonCongruent, Inconclusive };

inline const char* to_string(Congruence c) noexcept
{
    switch (c) {
    case Congruence::Congruent: return "congruent";
    case Congruence::NonCongruent: return "non-congruent";
    case Congruence::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct CongruenceVerdict {
    std::string family;
    std::string parameter;
    double gamma = 1.0;
    std::vector<double> eps;
    std::vector<double> derivatives;
    std::vector<int> signs;
    Congruence verdict = Congruence::Congruent;

    friend bool operator==(const CongruenceVerdict&, const CongruenceVerdict&) = default;
};

/// Signs of dQA/d(param) across the eps grid. Zero signs are compatible
/// with either direction. Opposite nonzero signs make the family
/// non-congruent, unless every point on one side sits within 10x of its
/// noise floor, in which case the conflict is reported as inconclusive.
inline CongruenceVerdict congruence_check(const Family& f, std::string_view param, double gamma,
                                          std::size_t grid_size = kDefaultGridSize, double h = 0.0)
{
    if (grid_size < 8) throw ArgumentError("congruence grid needs at least 8 points");
    CongruenceVerdict v;
    v.family = f.describe();
    v.parameter = std::string(param);
    v.gamma = gamma;
    v.eps = congruence_grid(gamma, grid_size);
    bool pos = false, neg = false, pos_strong = false, neg_strong = false;
    for (double e : v.eps) {
        const QaPartial d = qa_partial(f, param, e, gamma, h);
        v.derivatives.push_back(d.derivative);
        v.signs.push_back(d.sign);
        const bool strong = std::abs(d.derivative) >= 10.0 * d.noise_floor;
        if (d.sign > 0) {
            pos = true;
            pos_strong = pos_strong || strong;
        } else if (d.sign < 0) {
            neg = true;
            neg_strong = neg_strong || strong;
        }
    }
    if (pos && neg)
        v.verdict = (pos_strong && neg_strong) ? Congruence::NonCongruent : Congruence::Inconclusive;
    else
        v.verdict = Congruence::Congruent;
    return v;
}

} // namespace robmom
