// Voltage-to-rate activation functions with analytic derivatives up to order 4.
#pragma once

#include <string>
#include <vector>

namespace mf {

class ActivationFunction {
  public:
    enum class Kind { Logistic, ShiftedTanh, TanhHomotopy, Table };

    static ActivationFunction logistic();
    // f(x) = tanh(x) - tanh(i0); satisfies f(i0) = 0 exactly
    static ActivationFunction shifted_tanh(double i0);
    // f_p(x) = tanh(x) - tanh(i0) + p*(1 + tanh(i0)); p=0 is shifted_tanh, p=1 is nonnegative
    static ActivationFunction tanh_homotopy(double i0, double p);
    // natural cubic spline through (x, y) samples; derivatives by finite differences
    static ActivationFunction table(std::vector<double> x, std::vector<double> y);

    double value(double x) const;
    // order 0 = value, 1..4 = derivatives
    double deriv(int order, double x) const;

    Kind kind() const { return kind_; }
    double i0() const { return i0_; }
    double homotopy_p() const { return p_; }
    void set_homotopy_p(double p) { p_ = p; }

    std::string kind_name() const;
    static ActivationFunction from_name(const std::string& name, double i0, double p,
                                        const std::vector<double>& tx = {},
                                        const std::vector<double>& ty = {});

  private:
    ActivationFunction() = default;
    double table_value(double x) const;
    double table_fd_deriv(int order, double x) const;

    Kind kind_ = Kind::Logistic;
    double i0_ = 0.0;
    double p_ = 0.0;
    // spline knots and second derivatives
    std::vector<double> tx_, ty_, ty2_;
};

}  // namespace mf
