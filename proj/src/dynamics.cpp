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

#include "catsim/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <queue>
#include <sstream>
#include <thread>

#include <unsupported/Eigen/KroneckerProduct>

#include "catsim/diagnostics.hpp"
#include "catsim/error.hpp"
#include "catsim/integrator.hpp"
#include "catsim/io.hpp"
#include "catsim/rng.hpp"

namespace catsim {

namespace {

const cplx I(0.0, 1.0);

bool is_diagonal(const SparseMatrix& m) {
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (it.row() != it.col() && it.value() != 0.0) return false;
  return true;
}

SparseMatrix restrict(const SparseMatrix& a, const std::vector<Index>& basis) {
  std::vector<Index> pos(a.rows(), -1);
  for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<Index>(i);
  std::vector<Eigen::Triplet<cplx>> t;
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      if (pos[it.row()] >= 0 && pos[it.col()] >= 0)
        t.emplace_back(pos[it.row()], pos[it.col()], it.value());
  const Index d = static_cast<Index>(basis.size());
  SparseMatrix out(d, d);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrix sparse_identity(Index d) {
  SparseMatrix m(d, d);
  m.setIdentity();
  return m;
}

SparseMatrix build_superoperator(const SparseMatrix& h,
                                 const std::vector<std::pair<double, SparseMatrix>>& jumps) {
  const Index d = h.rows();
  const SparseMatrix id = sparse_identity(d);
  SparseMatrix ht = h.transpose();
  SparseMatrix s = SparseMatrix(Eigen::kroneckerProduct(id, h)) -
                   SparseMatrix(Eigen::kroneckerProduct(ht, id));
  s = (-I) * s;
  for (const auto& [rate, c] : jumps) {
    const SparseMatrix cdc = c.adjoint() * c;
    const SparseMatrix cconj = c.conjugate();
    const SparseMatrix cdct = cdc.transpose();
    s += rate * SparseMatrix(Eigen::kroneckerProduct(cconj, c));
    s -= (0.5 * rate) * SparseMatrix(Eigen::kroneckerProduct(id, cdc));
    s -= (0.5 * rate) * SparseMatrix(Eigen::kroneckerProduct(cdct, id));
  }
  s.prune(cplx(0.0));
  s.makeCompressed();
  return s;
}

std::vector<std::pair<double, SparseMatrix>> collect_jumps(const ModelSpec& m) {
  std::vector<std::pair<double, SparseMatrix>> out;
  for (const auto& d : m.dissipators) out.emplace_back(d.rate, d.jump.matrix());
  return out;
}

DenseMatrix expand(const DenseMatrix& small, const std::vector<Index>& basis, Index dim) {
  DenseMatrix full = DenseMatrix::Zero(dim, dim);
  const Index d = small.rows();
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) full(basis[i], basis[j]) = small(i, j);
  return full;
}

DenseMatrix shrink(const DenseMatrix& full, const std::vector<Index>& basis) {
  const Index d = static_cast<Index>(basis.size());
  DenseMatrix s(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) s(i, j) = full(basis[i], basis[j]);
  return s;
}

template <class State>
std::unique_ptr<OdeStepper<State>> make_stepper(const IntegratorConfig& cfg,
                                                typename OdeStepper<State>::Rhs f) {
  if (cfg.method == Method::FixedRK4) {
    double h = cfg.fixed_step;
    if (!(h > 0.0)) h = cfg.max_step;
    if (!(h > 0.0) || !std::isfinite(h))
      fail(ErrorCode::Integration, "FixedRK4 needs fixed_step (or a finite max_step)");
    return std::make_unique<FixedRk4<State>>(std::move(f), h);
  }
  return std::make_unique<DormandPrince<State>>(std::move(f), cfg.rel_tol, cfg.abs_tol,
                                                cfg.max_step);
}

bool is_hermitian_op(const LinOp& op) { return op.is_hermitian(1e-12); }

}  // namespace

// ---------------------------------------------------------------------------

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    fail(ErrorCode::Integration, "integrator tolerances must be positive");
  if (!(max_step > 0.0)) fail(ErrorCode::Integration, "max_step must be positive");
  if (method == Method::FixedRK4 && !(fixed_step > 0.0) && !std::isfinite(max_step))
    fail(ErrorCode::Integration, "FixedRK4 needs a positive fixed_step");
  if (store_times.empty()) fail(ErrorCode::Integration, "store_times is empty");
  for (std::size_t i = 1; i < store_times.size(); ++i)
    if (!(store_times[i] > store_times[i - 1]))
      fail(ErrorCode::Integration, "store_times must be strictly increasing");
}

std::vector<double> IntegratorConfig::linspace(double t0, double t1, std::size_t count) {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = t0;
    return v;
  }
  for (std::size_t i = 0; i < count; ++i)
    v[i] = t0 + (t1 - t0) * double(i) / double(count - 1);
  v.back() = t1;
  return v;
}

const std::vector<double>& EvolutionRecord::trace(const std::string& name) const {
  auto it = traces.find(name);
  if (it == traces.end()) fail(ErrorCode::Domain, "no observable trace named '" + name + "'");
  return it->second;
}

// ---------------------------------------------------------------------------

LindbladGenerator::LindbladGenerator(const ModelSpec& model, std::size_t limit) {
  model.validate();
  build(model.hamiltonian.matrix(), collect_jumps(model), limit);
}

LindbladGenerator::LindbladGenerator(const ModelSpec& model, const std::vector<Index>& basis,
                                     std::size_t limit) {
  model.validate();
  auto jumps = collect_jumps(model);
  for (auto& j : jumps) j.second = restrict(j.second, basis);
  build(restrict(model.hamiltonian.matrix(), basis), jumps, limit);
}

void LindbladGenerator::build(const SparseMatrix& h,
                              const std::vector<std::pair<double, SparseMatrix>>& jumps,
                              std::size_t limit) {
  dim_ = h.rows();
  use_super_ = static_cast<std::size_t>(dim_) <= limit;
  if (use_super_) {
    super_ = build_superoperator(h, jumps);
    super_.makeCompressed();
    return;
  }
  h_ = h;
  h_.makeCompressed();
  diag_weight_ = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& [rate, c] : jumps) {
    if (is_diagonal(c)) {
      Eigen::VectorXcd d = DenseMatrix(c).diagonal();
      bool real = true;
      for (Index i = 0; i < dim_; ++i) real = real && d[i].imag() == 0.0;
      if (real) {
        // rate (d_i d_j - d_i^2/2 - d_j^2/2) = -rate/2 (d_i - d_j)^2
        for (Index j = 0; j < dim_; ++j)
          for (Index i = 0; i < dim_; ++i) {
            const double diff = d[i].real() - d[j].real();
            diag_weight_(i, j) -= 0.5 * rate * diff * diff;
          }
        have_diag_ = true;
        continue;
      }
    }
    jumps_.push_back(RowSparse(std::sqrt(rate) * c));
    jumps_.back().makeCompressed();
    jumps_adj_.push_back(RowSparse(jumps_.back().adjoint()));
    jumps_adj_.back().makeCompressed();
  }
}

void LindbladGenerator::apply(const DenseMatrix& rho, DenseMatrix& out) const {
  if (use_super_) {
    out.resize(dim_, dim_);
    Eigen::Map<const Eigen::VectorXcd> v(rho.data(), dim_ * dim_);
    Eigen::Map<Eigen::VectorXcd> w(out.data(), dim_ * dim_);
    w.noalias() = super_ * v;
    return;
  }
  // y = -i H rho - 1/2 sum c^dag c rho; rho is Hermitian so y + y^dag is the
  // no-jump part. c^dag c is never formed: on spin products it is far denser
  // than c. c rho c^dag = (c (c rho)^dag)^dag keeps the sparse factor on the left.
  DenseMatrix y(dim_, dim_), t, td, u, jump_part = DenseMatrix::Zero(dim_, dim_);
  y.noalias() = h_ * rho;
  y *= -I;
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    t.noalias() = jumps_[k] * rho;
    y.noalias() -= 0.5 * (jumps_adj_[k] * t);
    td = t.adjoint();  // a lazy adjoint on the right is several times slower
    u.noalias() = jumps_[k] * td;
    jump_part += u.adjoint();
  }
  out = y + y.adjoint();
  out += jump_part;
  if (have_diag_) out.array() += rho.array() * diag_weight_.array();
}

SparseMatrix lindblad_superoperator(const ModelSpec& model) {
  model.validate();
  return build_superoperator(model.hamiltonian.matrix(), collect_jumps(model));
}

DenseMatrix lindblad_rhs(const ModelSpec& model, const DenseMatrix& rho) {
  const SparseMatrix& h = model.hamiltonian.matrix();
  DenseMatrix out = (-I) * (h * rho - rho * h);
  for (const auto& d : model.dissipators) {
    const SparseMatrix& c = d.jump.matrix();
    const SparseMatrix cd = c.adjoint();
    const SparseMatrix cdc = cd * c;
    out += d.rate * (c * rho * cd - 0.5 * (cdc * rho + rho * cdc));
  }
  return out;
}

std::vector<Index> reachable_basis(const ModelSpec& model, const DenseMatrix& rho0) {
  const Index dim = model.space.total_dim();
  std::vector<std::vector<Index>> adj(dim);
  auto add_edges = [&](const SparseMatrix& m) {
    for (Index k = 0; k < m.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(m, k); it; ++it)
        if (it.value() != 0.0 && it.row() != it.col()) {
          adj[it.col()].push_back(it.row());
          adj[it.row()].push_back(it.col());
        }
  };
  add_edges(model.hamiltonian.matrix());
  for (const auto& d : model.dissipators) add_edges(d.jump.matrix());

  std::vector<char> seen(dim, 0);
  std::queue<Index> q;
  for (Index i = 0; i < dim; ++i)
    if (std::abs(rho0(i, i)) > 0.0) {
      seen[i] = 1;
      q.push(i);
    }
  while (!q.empty()) {
    const Index i = q.front();
    q.pop();
    for (Index j : adj[i])
      if (!seen[j]) {
        seen[j] = 1;
        q.push(j);
      }
  }
  std::vector<Index> basis;
  for (Index i = 0; i < dim; ++i)
    if (seen[i]) basis.push_back(i);
  return basis;
}

double population_leak(const DensityMatrix& rho) {
  const SpaceDescriptor& sp = rho.space();
  double worst = 0.0;
  for (std::size_t slot = 0; slot < sp.size(); ++slot) {
    const Index top = sp.factor(slot).truncation_level();
    if (top < 0) continue;
    Index inner = 1;
    for (std::size_t k = slot + 1; k < sp.size(); ++k) inner *= sp.factor(k).dim();
    const Index fd = sp.factor(slot).dim();
    double p = 0.0;
    for (Index i = 0; i < sp.total_dim(); ++i)
      if ((i / inner) % fd == top) p += rho.entries()(i, i).real();
    worst = std::max(worst, p);
  }
  return worst;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("CATSIM_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// ---------------------------------------------------------------------------

EvolutionRecord evolve_master(const ModelSpec& model, const DensityMatrix& rho0,
                              const IntegratorConfig& cfg, const MasterOptions& opts) {
  model.validate();
  cfg.validate();
  if (!(rho0.space() == model.space))
    fail(ErrorCode::DimensionMismatch, "initial state lives on " + rho0.space().describe() +
                                           ", model on " + model.space.describe());
  rho0.validate();
  const Index dim = model.space.total_dim();

  std::vector<Index> basis;
  if (opts.restrict_to_reachable) {
    basis = reachable_basis(model, rho0.entries());
    if (static_cast<Index>(basis.size()) == dim) basis.clear();
  }
  const bool restricted = !basis.empty();
  auto gen = restricted
                 ? std::make_shared<LindbladGenerator>(model, basis, opts.superoperator_dim_limit)
                 : std::make_shared<LindbladGenerator>(model, opts.superoperator_dim_limit);

  auto stepper = make_stepper<DenseMatrix>(
      cfg, [gen](double, const DenseMatrix& y, DenseMatrix& dy) { gen->apply(y, dy); });
  const double t_start = std::min(0.0, cfg.store_times.front());
  stepper->reset(t_start, restricted ? shrink(rho0.entries(), basis) : rho0.entries());

  std::vector<bool> hermitian(opts.observables.size());
  for (std::size_t k = 0; k < opts.observables.size(); ++k) {
    if (!(opts.observables[k].op.space() == model.space))
      fail(ErrorCode::DimensionMismatch, "observable '" + opts.observables[k].name +
                                             "' lives on another space");
    hermitian[k] = is_hermitian_op(opts.observables[k].op);
  }

  EvolutionRecord rec;
  bool leak_warned = false;
  for (double ts : cfg.store_times) {
    while (stepper->time() < ts) stepper->step(ts);
    DensityMatrix rho(model.space,
                      restricted ? expand(stepper->state(), basis, dim) : stepper->state());
    rec.times.push_back(ts);
    for (std::size_t k = 0; k < opts.observables.size(); ++k) {
      const cplx v = rho.expectation(opts.observables[k].op);
      const std::string& n = opts.observables[k].name;
      if (hermitian[k]) {
        rec.traces[n].push_back(v.real());
      } else {
        rec.traces[n + ".re"].push_back(v.real());
        rec.traces[n + ".im"].push_back(v.imag());
      }
    }
    for (const auto& f : opts.functionals) rec.traces[f.name].push_back(f.fn(rho));
    const double leak = population_leak(rho);
    rec.population_leak.push_back(leak);
    if (leak > 1e-3 && !leak_warned) {
      std::ostringstream os;
      os << "model '" << model.label << "': population " << leak
         << " in the top truncation level at t=" << ts << "; enlarge the truncation";
      warn(os.str());
      leak_warned = true;
    }
    rec.max_trace_drift = std::max(rec.max_trace_drift, std::abs(rho.trace() - 1.0));
    if (opts.store_states) rec.states.push_back(std::move(rho));
  }
  if (rec.max_trace_drift > 1e-6) {
    std::ostringstream os;
    os << "model '" << model.label << "': trace drifted by " << rec.max_trace_drift;
    warn(os.str());
  }
  return rec;
}

// ---------------------------------------------------------------------------

TrajectoryRecord evolve_trajectory(const ModelSpec& model, const Ket& psi0,
                                   const IntegratorConfig& cfg, std::uint64_t seed) {
  model.validate();
  cfg.validate();
  if (!(psi0.space() == model.space))
    fail(ErrorCode::DimensionMismatch, "initial ket lives on another space");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    fail(ErrorCode::InvalidState, "initial ket is not normalized");

  SparseMatrix hnh = model.hamiltonian.matrix();
  std::vector<SparseMatrix> cs;
  std::vector<double> rates;
  for (const auto& d : model.dissipators) {
    hnh -= (0.5 * d.rate * I) * SparseMatrix(d.jump.matrix().adjoint() * d.jump.matrix());
    cs.push_back(d.jump.matrix());
    rates.push_back(d.rate);
  }
  hnh.makeCompressed();
  const SparseMatrix gen = (-I) * hnh;

  auto stepper = make_stepper<DenseVector>(
      cfg, [&gen](double, const DenseVector& y, DenseVector& dy) { dy.noalias() = gen * y; });

  Rng rng(seed);
  TrajectoryRecord rec;
  rec.seed = seed;
  double threshold = rng.uniform();
  const double t_start = std::min(0.0, cfg.store_times.front());
  stepper->reset(t_start, psi0.amplitudes());
  DenseVector probe;

  for (double ts : cfg.store_times) {
    while (stepper->time() < ts) {
      stepper->step(ts);
      if (cs.empty() || stepper->state().squaredNorm() >= threshold) continue;
      // Locate the crossing inside the step just taken.
      double lo = 0.0, hi = 1.0;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        stepper->interpolate(mid, probe);
        (probe.squaredNorm() < threshold ? hi : lo) = mid;
      }
      stepper->interpolate(hi, probe);
      const double tj = hi == 1.0 ? stepper->time()
                                  : stepper->last_t0() + hi * stepper->last_h();
      std::vector<double> w(cs.size());
      double total = 0.0;
      for (std::size_t k = 0; k < cs.size(); ++k) {
        w[k] = rates[k] * (cs[k] * probe).squaredNorm();
        total += w[k];
      }
      if (!(total > 0.0)) {
        std::ostringstream os;
        os << "all jump probabilities vanish at t=" << tj << " in model '" << model.label << "'";
        fail(ErrorCode::NumericalDegeneracy, os.str());
      }
      const double pick = rng.uniform() * total;
      std::size_t k = 0;
      for (double acc = w[0]; acc < pick && k + 1 < cs.size(); acc += w[++k]) {
      }
      DenseVector next = cs[k] * probe;
      next /= next.norm();
      rec.jumps.push_back({tj, k});
      stepper->reset(tj, next);
      threshold = rng.uniform();
    }
    rec.times.push_back(ts);
    rec.kets.emplace_back(model.space, stepper->state() / stepper->state().norm());
  }
  return rec;
}

EvolutionRecord average_trajectories(const ModelSpec& model, const Ket& psi0,
                                     const IntegratorConfig& cfg, std::size_t n_traj,
                                     std::uint64_t seed0, const TrajectoryOptions& opts) {
  if (n_traj < 1) fail(ErrorCode::Domain, "n_traj must be >= 1");
  cfg.validate();
  std::vector<Observable> obs = opts.observables;
  const Index dim = model.space.total_dim();
  if (obs.empty()) {
    if (dim > 64)
      fail(ErrorCode::Domain, "average_trajectories needs explicit observables above 64 dims");
    for (Index i = 0; i < dim; ++i) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
      d[i] = 1.0;
      obs.push_back({"p" + std::to_string(i), LinOp::diagonal(model.space, d)});
    }
  }
  const std::size_t nt = cfg.store_times.size(), no = obs.size();
  // values[traj][time * no + obs]
  std::vector<std::vector<double>> values(n_traj);
  std::vector<std::vector<Ket>> kets(opts.store_states ? n_traj : 0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_traj) return;
      try {
        TrajectoryRecord tr = evolve_trajectory(model, psi0, cfg, seed0 + i);
        auto& v = values[i];
        v.resize(nt * no);
        for (std::size_t t = 0; t < nt; ++t)
          for (std::size_t k = 0; k < no; ++k)
            v[t * no + k] = tr.kets[t].expectation(obs[k].op).real();
        if (opts.store_states) kets[i] = std::move(tr.kets);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
        next.store(n_traj);
        return;
      }
    }
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(
      opts.threads ? opts.threads : default_thread_count(), static_cast<unsigned>(n_traj)));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);

  EvolutionRecord rec;
  rec.times = cfg.store_times;
  rec.n_trajectories = n_traj;
  const double n = double(n_traj);
  for (std::size_t k = 0; k < no; ++k) {
    auto& mean = rec.traces[obs[k].name];
    auto& se = rec.std_errors[obs[k].name];
    mean.assign(nt, 0.0);
    se.assign(nt, 0.0);
    for (std::size_t t = 0; t < nt; ++t) {
      double s = 0.0;
      for (std::size_t i = 0; i < n_traj; ++i) s += values[i][t * no + k];
      const double m = s / n;
      double ss = 0.0;
      for (std::size_t i = 0; i < n_traj; ++i) {
        const double d = values[i][t * no + k] - m;
        ss += d * d;
      }
      mean[t] = m;
      se[t] = n_traj > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    }
  }
  if (opts.store_states) {
    for (std::size_t t = 0; t < nt; ++t) {
      DenseMatrix acc = DenseMatrix::Zero(dim, dim);
      for (std::size_t i = 0; i < n_traj; ++i) {
        const DenseVector& v = kets[i][t].amplitudes();
        acc.noalias() += v * v.adjoint();
      }
      rec.states.emplace_back(model.space, acc / n);
    }
  }
  for (const auto& st : rec.states)
    rec.population_leak.push_back(population_leak(st));
  return rec;
}

// ---------------------------------------------------------------------------

DensityMatrix steady_state(const ModelSpec& model, const DensityMatrix& rho0,
                           double residual_tol, const SteadyStateOptions& opts) {
  if (!(residual_tol > 0.0)) fail(ErrorCode::Domain, "residual_tol must be positive");
  model.validate();
  if (!(rho0.space() == model.space))
    fail(ErrorCode::DimensionMismatch, "initial state lives on another space");
  rho0.validate();
  const Index dim = model.space.total_dim();
  std::vector<Index> basis = reachable_basis(model, rho0.entries());
  if (static_cast<Index>(basis.size()) == dim) basis.clear();
  const bool restricted = !basis.empty();
  auto gen = restricted
                 ? std::make_shared<LindbladGenerator>(model, basis, opts.superoperator_dim_limit)
                 : std::make_shared<LindbladGenerator>(model, opts.superoperator_dim_limit);
  IntegratorConfig cfg;
  cfg.rel_tol = opts.rel_tol;
  cfg.abs_tol = opts.abs_tol;
  auto stepper = make_stepper<DenseMatrix>(
      cfg, [gen](double, const DenseMatrix& y, DenseMatrix& dy) { gen->apply(y, dy); });
  stepper->reset(0.0, restricted ? shrink(rho0.entries(), basis) : rho0.entries());

  double interval = opts.check_interval;
  if (!(interval > 0.0)) {
    const double r = model.largest_rate();
    interval = r > 0.0 ? 10.0 / r : 1.0;
  }
  DenseMatrix d;
  double residual = std::numeric_limits<double>::infinity();
  for (double t = 0.0;;) {
    gen->apply(stepper->state(), d);
    residual = d.norm() / stepper->state().norm();
    if (residual < residual_tol) break;
    if (t >= opts.max_time) {
      std::ostringstream os;
      os << "steady state not reached by t=" << t << " (residual " << residual
         << ", tolerance " << residual_tol << ")";
      throw TimeoutError(os.str(), residual, t);
    }
    t = std::min(t + interval, opts.max_time);
    while (stepper->time() < t) stepper->step(t);
  }
  return DensityMatrix(model.space,
                       restricted ? expand(stepper->state(), basis, dim) : stepper->state());
}

void write_record_csv(const EvolutionRecord& rec, const std::string& path,
                      const std::vector<std::string>& header_comments) {
  std::vector<std::string> cols{"t"};
  for (const auto& [name, _] : rec.traces) cols.push_back(name);
  for (const auto& [name, _] : rec.std_errors) cols.push_back(name + ".stderr");
  const bool leak = rec.population_leak.size() == rec.times.size();
  if (leak) cols.push_back("population_leak");
  CsvWriter w(path, cols, header_comments);
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    std::vector<double> row{rec.times[i]};
    for (const auto& [_, v] : rec.traces) row.push_back(v[i]);
    for (const auto& [_, v] : rec.std_errors) row.push_back(v[i]);
    if (leak) row.push_back(rec.population_leak[i]);
    w.row(row);
  }
  w.close();
}

}  // namespace catsim
