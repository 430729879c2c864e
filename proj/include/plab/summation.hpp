#pragma once

#include <cmath>
#include <complex>

namespace plab {

/// Neumaier-compensated running sum. Merging two accumulators keeps the
/// compensation terms, so partitioned scans agree with a sequential pass to
/// within a few ulps.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double v) : sum_(v) {}

  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }

  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }

  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexCompensatedSum {
 public:
  void add(std::complex<double> v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  void merge(const ComplexCompensatedSum& o) {
    re_.merge(o.re_);
    im_.merge(o.im_);
  }
  ComplexCompensatedSum& operator+=(std::complex<double> v) {
    add(v);
    return *this;
  }
  [[nodiscard]] std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace plab
