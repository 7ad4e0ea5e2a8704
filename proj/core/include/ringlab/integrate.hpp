#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ringlab::ode {

using VectorField =
    std::function<void(double t, std::span<const double> x,
                       std::span<double> dxdt)>;

struct IntegratorConfig {
  double rtol = 1e-5;
  double atol = 1e-5;
  double initial_step = 0.0;    // 0: pick automatically
  double max_step = 0.0;        // 0: no cap beyond the span
  double dense_output_dt = 0.1; // uniform sampling interval
};

// Uniformly sampled solution with flat row-major storage.
struct Trajectory {
  std::vector<double> times;
  int dim = 0;
  std::vector<double> data;  // sample i occupies [i*dim, (i+1)*dim)

  double final_time = 0.0;            // exact integration end point
  std::vector<double> final_state;    // state at final_time

  std::map<std::string, std::string> meta;

  std::size_t size() const { return times.size(); }
  std::span<const double> state(std::size_t i) const {
    return {data.data() + i * dim, static_cast<std::size_t>(dim)};
  }
  double value(std::size_t i, int component) const {
    return data[i * dim + component];
  }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }

  void push(double t, std::span<const double> x);
  void append(const Trajectory& tail);   // continues the uniform grid
  void drop_front(std::size_t samples);  // forget the oldest samples

  // index of the last sample with time <= t (throws if none)
  std::size_t index_at(double t) const;
};

// One accepted step's quartic interpolation polynomial.
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  int dim = 0;
  std::vector<double> r;  // 5 stacked coefficient vectors, length 5*dim

  void eval(double t, std::span<double> out) const;
};

// Piecewise interpolant covering the whole integration span.
class DenseSolution {
public:
  void add(DenseSegment seg) { segments_.push_back(std::move(seg)); }
  bool empty() const { return segments_.empty(); }
  double t_begin() const;
  double t_end() const;
  void eval(double t, std::span<double> out) const;
  const std::vector<DenseSegment>& segments() const { return segments_; }

private:
  const DenseSegment& locate(double t) const;
  std::vector<DenseSegment> segments_;
};

// Core adaptive stepper (Dormand-Prince 4(5) with PI step size control).
// Calls on_step after every accepted step with that step's interpolant.
// Throws DivergenceError when the state stops being finite and
// StiffnessError when the step size underflows.
void integrate_steps(const VectorField& f, std::span<const double> x0,
                     double t0, double t1, const IntegratorConfig& cfg,
                     const std::function<void(const DenseSegment&)>& on_step);

// Integrate and sample on the uniform grid t0 + k*dense_output_dt.
Trajectory integrate(const VectorField& f, std::span<const double> x0,
                     double t0, double t1, const IntegratorConfig& cfg = {});

// Integrate keeping every step's interpolant.
DenseSolution integrate_dense(const VectorField& f, std::span<const double> x0,
                              double t0, double t1,
                              const IntegratorConfig& cfg = {});

}  // namespace ringlab::ode
