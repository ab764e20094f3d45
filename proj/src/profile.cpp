#include "strat/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace strat {

namespace {

class HomogeneousModel final : public ProfileModel {
public:
    explicit HomogeneousModel(Material m) : m_(m) {}
    Material value(double) const override { return m_; }
    std::optional<Material> derivative(double) const override { return Material{0.0, 0.0}; }

private:
    Material m_;
};

class StackModel final : public ProfileModel {
public:
    StackModel(double a, const std::vector<Layer>& layers) {
        double x = a;
        for (const auto& l : layers) {
            x += l.thickness;
            ends_.push_back(x);
            mats_.push_back({l.eps, l.mu});
        }
    }

    // Interfaces belong to the layer on their right; the last layer owns a+ℓ.
    Material value(double x) const override {
        auto it = std::upper_bound(ends_.begin(), ends_.end(), x);
        auto i = static_cast<std::size_t>(it - ends_.begin());
        return mats_[std::min(i, mats_.size() - 1)];
    }
    std::optional<Material> derivative(double) const override { return Material{0.0, 0.0}; }
    std::vector<double> breakpoints() const override {
        return {ends_.begin(), ends_.end() - 1};
    }

private:
    std::vector<double> ends_;
    std::vector<Material> mats_;
};

// Shape-preserving piecewise cubic Hermite interpolation of one real channel.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(const std::vector<double>& x, std::vector<double> y) : x_(x), y_(std::move(y)) {
        const std::size_t n = x_.size();
        d_.assign(n, 0.0);
        if (n == 2) {
            d_[0] = d_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
            return;
        }
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            delta[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) continue;
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
        d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    double value(std::size_t i, double t, double h) const {
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] +
               (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * d_[i + 1];
    }
    double slope(std::size_t i, double t, double h) const {
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * y_[i] + (-6 * t2 + 6 * t) * y_[i + 1]) / h +
               (3 * t2 - 4 * t + 1) * d_[i] + (3 * t2 - 2 * t) * d_[i + 1];
    }

private:
    static double end_slope(double h0, double h1, double m0, double m1) {
        double d = ((2 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
        if (d * m0 <= 0.0) {
            d = 0.0;
        } else if (m0 * m1 <= 0.0 && std::abs(d) > std::abs(3 * m0)) {
            d = 3 * m0;
        }
        return d;
    }

    std::vector<double> x_, y_, d_;
};

class TabulatedModel final : public ProfileModel {
public:
    TabulatedModel(std::vector<double> xs, const std::vector<Complex>& eps, const std::vector<Complex>& mu)
        : xs_(std::move(xs)) {
        auto channel = [](const std::vector<Complex>& v, bool imag) {
            std::vector<double> out(v.size());
            std::transform(v.begin(), v.end(), out.begin(),
                           [imag](Complex z) { return imag ? z.imag() : z.real(); });
            return out;
        };
        eps_re_ = MonotoneCubic(xs_, channel(eps, false));
        eps_im_ = MonotoneCubic(xs_, channel(eps, true));
        mu_re_ = MonotoneCubic(xs_, channel(mu, false));
        mu_im_ = MonotoneCubic(xs_, channel(mu, true));
    }

    Material value(double x) const override {
        auto [i, t, h] = locate(x);
        return {{eps_re_.value(i, t, h), eps_im_.value(i, t, h)}, {mu_re_.value(i, t, h), mu_im_.value(i, t, h)}};
    }
    std::optional<Material> derivative(double x) const override {
        auto [i, t, h] = locate(x);
        return Material{{eps_re_.slope(i, t, h), eps_im_.slope(i, t, h)},
                        {mu_re_.slope(i, t, h), mu_im_.slope(i, t, h)}};
    }

private:
    struct Cell {
        std::size_t i;
        double t;
        double h;
    };
    Cell locate(double x) const {
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t i = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
        i = std::min(i, xs_.size() - 2);
        const double h = xs_[i + 1] - xs_[i];
        return {i, std::clamp((x - xs_[i]) / h, 0.0, 1.0), h};
    }

    std::vector<double> xs_;
    MonotoneCubic eps_re_, eps_im_, mu_re_, mu_im_;
};

class ParametricModel final : public ProfileModel {
public:
    ParametricModel(MediumProfile::Evaluator value, MediumProfile::Evaluator derivative)
        : value_(std::move(value)), derivative_(std::move(derivative)) {}
    Material value(double x) const override { return value_(x); }
    std::optional<Material> derivative(double x) const override {
        if (!derivative_) return std::nullopt;
        return derivative_(x);
    }

private:
    MediumProfile::Evaluator value_;
    MediumProfile::Evaluator derivative_;
};

class RestrictedModel final : public ProfileModel {
public:
    RestrictedModel(std::shared_ptr<const ProfileModel> parent, double x0, double x1)
        : parent_(std::move(parent)), x0_(x0), x1_(x1) {
        // A cut on a parent discontinuity keeps the value from the inside.
        const auto bps = parent_->breakpoints();
        if (std::find(bps.begin(), bps.end(), x1_) != bps.end()) x1_ = std::nextafter(x1_, x0_);
    }
    Material value(double x) const override { return parent_->value(std::clamp(x, x0_, x1_)); }
    std::optional<Material> derivative(double x) const override {
        return parent_->derivative(std::clamp(x, x0_, x1_));
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> out;
        for (double b : parent_->breakpoints()) {
            if (b > x0_ && b < x1_) out.push_back(b);
        }
        return out;
    }

private:
    std::shared_ptr<const ProfileModel> parent_;
    double x0_, x1_;
};

class ConjugatedModel final : public ProfileModel {
public:
    explicit ConjugatedModel(std::shared_ptr<const ProfileModel> parent) : parent_(std::move(parent)) {}
    Material value(double x) const override {
        const Material m = parent_->value(x);
        return {std::conj(m.eps), std::conj(m.mu)};
    }
    std::optional<Material> derivative(double x) const override {
        auto d = parent_->derivative(x);
        if (!d) return std::nullopt;
        return Material{std::conj(d->eps), std::conj(d->mu)};
    }
    std::vector<double> breakpoints() const override { return parent_->breakpoints(); }

private:
    std::shared_ptr<const ProfileModel> parent_;
};

bool is_vacuum(Complex z) { return std::abs(z - 1.0) <= 1e-12; }

}  // namespace

MediumProfile::MediumProfile(double a, double ell, std::shared_ptr<const ProfileModel> model)
    : a_(a), ell_(ell), model_(std::move(model)) {
    if (!(ell > 0.0) || !std::isfinite(ell) || !std::isfinite(a)) {
        throw InvalidArgument("profile support must have finite a and positive thickness");
    }
    if (!model_) throw InvalidArgument("profile model is null");
}

MediumProfile MediumProfile::vacuum(double a, double ell) { return homogeneous(1.0, 1.0, a, ell); }

MediumProfile MediumProfile::homogeneous(Complex eps, Complex mu, double a, double ell) {
    return {a, ell, std::make_shared<HomogeneousModel>(Material{eps, mu})};
}

MediumProfile MediumProfile::stack(double a, const std::vector<Layer>& layers) {
    if (layers.empty()) throw InvalidArgument("layer stack is empty");
    double ell = 0.0;
    for (const auto& l : layers) {
        if (!(l.thickness > 0.0)) throw InvalidArgument("layer thickness must be positive");
        ell += l.thickness;
    }
    return {a, ell, std::make_shared<StackModel>(a, layers)};
}

MediumProfile MediumProfile::tabulated(std::vector<double> xs, std::vector<Complex> eps, std::vector<Complex> mu,
                                       bool allow_edge_jump) {
    if (xs.size() < 2) throw InvalidArgument("tabulated profile needs at least two samples");
    if (mu.empty()) mu.assign(xs.size(), Complex{1.0, 0.0});
    if (eps.size() != xs.size() || mu.size() != xs.size()) {
        throw InvalidArgument("tabulated profile columns have different lengths");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw InvalidArgument("tabulated x samples must be strictly increasing");
    }
    if (!allow_edge_jump) {
        const std::size_t n = xs.size() - 1;
        if (!is_vacuum(eps[0]) || !is_vacuum(mu[0]) || !is_vacuum(eps[n]) || !is_vacuum(mu[n])) {
            throw InvalidArgument("tabulated profile must equal vacuum (1) at both end samples");
        }
    }
    const double a = xs.front();
    const double ell = xs.back() - xs.front();
    return {a, ell, std::make_shared<TabulatedModel>(std::move(xs), eps, mu)};
}

MediumProfile MediumProfile::parametric(double a, double ell, Evaluator value, Evaluator derivative) {
    if (!value) throw InvalidArgument("parametric profile needs an evaluator");
    return {a, ell, std::make_shared<ParametricModel>(std::move(value), std::move(derivative))};
}

Material MediumProfile::at(double x) const {
    if (!contains(x)) return {};
    return model_->value(x);
}

Material MediumProfile::derivative_at(double x) const {
    if (!contains(x)) return {0.0, 0.0};
    if (auto d = model_->derivative(x)) return *d;

    // Fourth-order stencil, shifted so that every node stays inside the support.
    const double h = 1e-4 * ell_;
    auto f = [&](double t) { return model_->value(t); };
    auto combine = [](std::initializer_list<std::pair<double, Material>> terms, double scale) {
        Material out{0.0, 0.0};
        for (const auto& [w, m] : terms) {
            out.eps += w * m.eps;
            out.mu += w * m.mu;
        }
        out.eps /= scale;
        out.mu /= scale;
        return out;
    };
    if (x - 2 * h >= a_ && x + 2 * h <= end()) {
        return combine({{1.0, f(x - 2 * h)}, {-8.0, f(x - h)}, {8.0, f(x + h)}, {-1.0, f(x + 2 * h)}}, 12.0 * h);
    }
    if (x - 2 * h < a_) {
        return combine({{-25.0, f(x)}, {48.0, f(x + h)}, {-36.0, f(x + 2 * h)}, {16.0, f(x + 3 * h)},
                        {-3.0, f(x + 4 * h)}},
                       12.0 * h);
    }
    return combine({{25.0, f(x)}, {-48.0, f(x - h)}, {36.0, f(x - 2 * h)}, {-16.0, f(x - 3 * h)},
                    {3.0, f(x - 4 * h)}},
                   12.0 * h);
}

bool MediumProfile::has_analytic_derivative() const { return model_->derivative(a_).has_value(); }

std::vector<double> MediumProfile::breakpoints() const { return model_->breakpoints(); }

std::vector<double> MediumProfile::smooth_pieces() const {
    std::vector<double> out{a_};
    for (double b : breakpoints()) {
        if (b > out.back() && b < end()) out.push_back(b);
    }
    out.push_back(end());
    return out;
}

MediumProfile MediumProfile::restricted(double x0, double x1) const {
    if (!(x0 >= a_ && x1 <= end() && x1 > x0)) {
        throw InvalidArgument("restriction window must lie inside the support");
    }
    return {x0, x1 - x0, std::make_shared<RestrictedModel>(model_, x0, x1)};
}

MediumProfile MediumProfile::conjugated() const { return {a_, ell_, std::make_shared<ConjugatedModel>(model_)}; }

MediumProfile linear_ramp(double a, double ell, Material left, Material right) {
    const Material slope{(right.eps - left.eps) / ell, (right.mu - left.mu) / ell};
    return MediumProfile::parametric(
        a, ell,
        [=](double x) {
            const double t = x - a;
            return Material{left.eps + slope.eps * t, left.mu + slope.mu * t};
        },
        [=](double) { return slope; });
}

}  // namespace strat
