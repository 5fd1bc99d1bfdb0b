// Copyright 2026 The catsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "catsim/hilbert.hpp"
#include "catsim/models.hpp"

namespace catsim {

enum class Method { AdaptiveRK45, FixedRK4 };

struct IntegratorConfig {
  Method method = Method::AdaptiveRK45;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double fixed_step = 0.0;  // FixedRK4 only
  std::vector<double> store_times;

  void validate() const;
  static std::vector<double> linspace(double t0, double t1, std::size_t count);
};

struct Observable {
  std::string name;
  LinOp op;
};

// Named observable whose value is computed from the state itself, e.g. a
// fidelity. Receives the state at every stored time.
struct StateFunctional {
  std::string name;
  std::function<double(const DensityMatrix&)> fn;
};

struct EvolutionRecord {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::map<std::string, std::vector<double>> traces;
  std::map<std::string, std::vector<double>> std_errors;
  std::vector<double> population_leak;
  double max_trace_drift = 0.0;
  std::size_t n_trajectories = 0;

  const std::vector<double>& trace(const std::string& name) const;
};

struct JumpEvent {
  double time = 0.0;
  std::size_t channel = 0;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Ket> kets;
  std::vector<JumpEvent> jumps;
  std::uint64_t seed = 0;
};

struct MasterOptions {
  bool store_states = true;
  std::vector<Observable> observables;
  std::vector<StateFunctional> functionals;
  std::size_t superoperator_dim_limit = 300;
  // Evolve only on the smallest basis subset closed under H and the jumps
  // that contains the support of rho0. Exact, and often a large saving.
  bool restrict_to_reachable = true;
};

// Applies the Lindblad generator to a density matrix. Spaces up to
// superoperator_dim_limit use an assembled sparse superoperator; larger ones
// use operator products directly.
class LindbladGenerator {
 public:
  explicit LindbladGenerator(const ModelSpec& model, std::size_t superoperator_dim_limit = 300);
  // Generator restricted to the listed basis states (the subset must be
  // invariant under the model, see reachable_basis).
  LindbladGenerator(const ModelSpec& model, const std::vector<Index>& basis,
                    std::size_t superoperator_dim_limit = 300);

  Index dim() const { return dim_; }
  bool uses_superoperator() const { return use_super_; }
  void apply(const DenseMatrix& rho, DenseMatrix& out) const;

 private:
  void build(const SparseMatrix& h, const std::vector<std::pair<double, SparseMatrix>>& jumps,
             std::size_t limit);

  // row-major: several times faster against dense right-hand sides
  using RowSparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

  Index dim_ = 0;
  bool use_super_ = false;
  RowSparse super_;
  RowSparse h_;
  std::vector<RowSparse> jumps_;          // sqrt(gamma) c, non-diagonal
  std::vector<RowSparse> jumps_adj_;
  Eigen::MatrixXd diag_weight_;           // combined effect of diagonal jumps
  bool have_diag_ = false;
};

// Sparse superoperator, column-stacking convention vec(A rho B) = (B^T kron A) vec(rho).
SparseMatrix lindblad_superoperator(const ModelSpec& model);
// Direct operator-form evaluation, used as a reference.
DenseMatrix lindblad_rhs(const ModelSpec& model, const DenseMatrix& rho);

std::vector<Index> reachable_basis(const ModelSpec& model, const DenseMatrix& rho0);

EvolutionRecord evolve_master(const ModelSpec& model, const DensityMatrix& rho0,
                              const IntegratorConfig& cfg, const MasterOptions& opts = {});

TrajectoryRecord evolve_trajectory(const ModelSpec& model, const Ket& psi0,
                                   const IntegratorConfig& cfg, std::uint64_t seed);

struct TrajectoryOptions {
  std::vector<Observable> observables;  // empty: basis populations (dim <= 64)
  unsigned threads = 0;                 // 0: CATSIM_THREADS or hardware
  bool store_states = false;            // ensemble-averaged |psi><psi|
};

EvolutionRecord average_trajectories(const ModelSpec& model, const Ket& psi0,
                                     const IntegratorConfig& cfg, std::size_t n_traj,
                                     std::uint64_t seed0, const TrajectoryOptions& opts = {});

struct SteadyStateOptions {
  double max_time = 1e5;
  double check_interval = 0.0;  // 0: 1 / largest rate * 10
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::size_t superoperator_dim_limit = 300;
};

DensityMatrix steady_state(const ModelSpec& model, const DensityMatrix& rho0,
                           double residual_tol, const SteadyStateOptions& opts = {});

double population_leak(const DensityMatrix& rho);
unsigned default_thread_count();

void write_record_csv(const EvolutionRecord& rec, const std::string& path,
                      const std::vector<std::string>& header_comments = {});

}  // namespace catsim
