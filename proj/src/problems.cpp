#include "declab/problems.hpp"

#include "declab/errors.hpp"

#include <cmath>
#include <numbers>

namespace declab {

namespace {

FormField one_form(int n, std::function<Eigen::VectorXd(const Eigen::VectorXd&)> g)
{
    return {1, n, std::move(g)};
}

double angle(const Eigen::VectorXd& x)
{
    double t = std::atan2(x(1), x(0));
    if (t < 0)
        t += 2 * std::numbers::pi;
    return t;
}

} // namespace

std::vector<std::string> problem_names()
{
    return {"trig2d", "trig3d", "corner", "linear2d", "linear3d"};
}

FormField smooth_form(int n, int k)
{
    const int count = int(increasing_tuples(n, k).size());
    return {k, n, [n, count](const Eigen::VectorXd& x) {
                Eigen::VectorXd c(count);
                for (int a = 0; a < count; ++a) {
                    double phase = 0.3 + 0.9 * a;
                    for (int d = 0; d < n; ++d)
                        phase += (1.1 - 0.4 * d + 0.25 * a) * x(d);
                    c(a) = std::sin(phase) + 0.5 * x(0) * x(n - 1);
                }
                return c;
            }};
}

Problem make_problem(const std::string& name, double mu)
{
    Problem p;
    p.name = name;
    if (name == "trig2d") {
        p.dim = 2;
        p.u = scalar_field(2, [](const Eigen::VectorXd& x) { return x(0) * x(0) * std::sin(x(1)); });
        p.du = one_form(2, [](const Eigen::VectorXd& x) {
            Eigen::VectorXd g(2);
            g << 2 * x(0) * std::sin(x(1)), x(0) * x(0) * std::cos(x(1));
            return g;
        });
        p.f = scalar_field(2, [](const Eigen::VectorXd& x) { return (x(0) * x(0) - 2) * std::sin(x(1)); });
    } else if (name == "trig3d") {
        p.dim = 3;
        p.u = scalar_field(3, [](const Eigen::VectorXd& x) {
            return x(0) * x(0) * std::sin(x(1)) + std::cos(x(2));
        });
        p.du = one_form(3, [](const Eigen::VectorXd& x) {
            Eigen::VectorXd g(3);
            g << 2 * x(0) * std::sin(x(1)), x(0) * x(0) * std::cos(x(1)), -std::sin(x(2));
            return g;
        });
        p.f = scalar_field(3, [](const Eigen::VectorXd& x) {
            return (x(0) * x(0) - 2) * std::sin(x(1)) + std::cos(x(2));
        });
    } else if (name == "corner") {
        if (!(mu > 0))
            throw range_error("corner exponent must be positive");
        p.dim = 2;
        p.u = scalar_field(2, [mu](const Eigen::VectorXd& x) {
            const double r = x.norm();
            return r == 0 ? 0.0 : std::pow(r, mu) * std::sin(mu * angle(x));
        });
        p.du = one_form(2, [mu](const Eigen::VectorXd& x) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(2);
            const double r = x.norm();
            if (r == 0)
                return g;
            const double t = angle(x), s = mu * std::pow(r, mu - 1);
            g << s * std::sin((mu - 1) * t), s * std::cos((mu - 1) * t);
            return g;
        });
        p.f = scalar_field(2, [](const Eigen::VectorXd&) { return 0.0; });
    } else if (name == "linear2d" || name == "linear3d") {
        const int n = name == "linear2d" ? 2 : 3;
        p.dim = n;
        Eigen::VectorXd a(3);
        a << 2.0, -3.0, 0.5;
        p.u = scalar_field(n, [a, n](const Eigen::VectorXd& x) { return 1.0 + a.head(n).dot(x); });
        p.du = one_form(n, [a, n](const Eigen::VectorXd&) { return Eigen::VectorXd(a.head(n)); });
        p.f = scalar_field(n, [](const Eigen::VectorXd&) { return 0.0; });
    } else {
        throw lookup_error("unknown problem '" + name + "'");
    }
    return p;
}

} // namespace declab
