#include "pcmf/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pcmf {

Norm norm_from_string(const std::string& s) {
    if (s == "1") return Norm::L1;
    if (s == "2") return Norm::L2;
    if (s == "inf") return Norm::Linf;
    throw InvalidInput("unknown norm '" + s + "' (expected 1, 2 or inf)");
}

std::string to_string(Norm q) {
    switch (q) {
        case Norm::L1: return "1";
        case Norm::L2: return "2";
        case Norm::Linf: return "inf";
    }
    return "?";
}

Vector project_l1_ball(const Vector& v, double radius) {
    if (radius < 0.0) throw InvalidInput("project_l1_ball: negative radius");
    if (radius == 0.0) return Vector::Zero(v.size());
    if (v.lpNorm<1>() <= radius) return v;

    std::vector<double> mu(v.data(), v.data() + v.size());
    for (auto& m : mu) m = std::abs(m);
    std::sort(mu.begin(), mu.end(), std::greater<double>());

    double cumsum = 0.0;
    double theta = 0.0;
    for (size_t j = 0; j < mu.size(); ++j) {
        cumsum += mu[j];
        const double t = (cumsum - radius) / static_cast<double>(j + 1);
        if (mu[j] - t <= 0.0) break;
        theta = t;
    }
    Vector out(v.size());
    for (Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i)) - theta;
        out(i) = a > 0.0 ? (v(i) > 0.0 ? a : -a) : 0.0;
    }
    return out;
}

Vector prox_group(const Vector& v, Norm q, double tau) {
    if (tau < 0.0) throw InvalidInput("prox_group: negative threshold");
    if (tau == 0.0) return v;
    switch (q) {
        case Norm::L2: {
            const double n = v.norm();
            if (n <= tau) return Vector::Zero(v.size());
            return (1.0 - tau / n) * v;
        }
        case Norm::L1: {
            Vector out(v.size());
            for (Index i = 0; i < v.size(); ++i) {
                const double a = std::abs(v(i)) - tau;
                out(i) = a > 0.0 ? (v(i) > 0.0 ? a : -a) : 0.0;
            }
            return out;
        }
        case Norm::Linf:
            // Moreau decomposition: prox of tau*||.||_inf is the residual of
            // projecting v/tau onto the unit l1 ball.
            return v - tau * project_l1_ball(v / tau, 1.0);
    }
    throw InvalidInput("prox_group: bad norm");
}

void prox_rows(Matrix& g, Norm q, const std::vector<double>& tau) {
    if (static_cast<Index>(tau.size()) != g.rows()) {
        throw InvalidInput("prox_rows: one threshold per row required");
    }
    if (q == Norm::L2) {
        // Fast path: block soft-threshold without temporaries.
        for (Index l = 0; l < g.rows(); ++l) {
            const double t = tau[static_cast<size_t>(l)];
            if (t <= 0.0) continue;
            const double n = g.row(l).norm();
            if (n <= t) {
                g.row(l).setZero();
            } else {
                g.row(l) *= (1.0 - t / n);
            }
        }
        return;
    }
    for (Index l = 0; l < g.rows(); ++l) {
        g.row(l) = prox_group(g.row(l).transpose(), q, tau[static_cast<size_t>(l)]).transpose();
    }
}

std::optional<Vector> project_sphere(const Vector& v) {
    const double n = v.norm();
    if (n < kSphereTol) return std::nullopt;
    return Vector(v / n);
}

}  // namespace pcmf
