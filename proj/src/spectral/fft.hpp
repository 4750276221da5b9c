#pragma once

// Thin wrapper over FFTW real-to-complex plans.  Plans are created once per
// (n1, n2) under a process-wide lock; execution is lock free.

#include <complex>
#include <memory>
#include <span>

namespace sqgad::spectral::detail {

class FftPlans {
 public:
  static std::shared_ptr<const FftPlans> get(int n1, int n2);

  FftPlans(int n1, int n2);
  ~FftPlans();
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int half() const { return n2_ / 2 + 1; }

  // real[n1*n2] -> half[n1*(n2/2+1)], unnormalized forward transform.
  void forward(std::span<const double> real,
               std::span<std::complex<double>> half) const;
  // half[n1*(n2/2+1)] -> real[n1*n2], unnormalized backward transform.
  // The input is copied; callers keep their buffer.
  void backward(std::span<const std::complex<double>> half,
                std::span<double> real) const;

 private:
  int n1_;
  int n2_;
  void* r2c_ = nullptr;
  void* c2r_ = nullptr;
};

}  // namespace sqgad::spectral::detail
