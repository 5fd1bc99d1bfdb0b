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

#include "catsim/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <nlohmann/json.hpp>

#include "catsim/diagnostics.hpp"
#include "catsim/dynamics.hpp"
#include "catsim/error.hpp"
#include "catsim/io.hpp"

namespace catsim {

namespace {

void require_same_space(const SpaceDescriptor& a, const SpaceDescriptor& b) {
  if (!(a == b))
    fail(ErrorCode::DimensionMismatch, "states live on " + a.describe() + " and " + b.describe());
}

Eigen::SelfAdjointEigenSolver<DenseMatrix> hermitian_eig(const DenseMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<DenseMatrix>(0.5 * (m + m.adjoint()));
}

void require_psd(double lmin, const char* what) {
  if (lmin < -1e-8) {
    std::ostringstream os;
    os << what << " is not positive semidefinite (eigenvalue " << lmin << ")";
    fail(ErrorCode::InvalidState, os.str());
  }
}

int fock_n_max(const SpaceDescriptor& sp) {
  const auto* f = sp.size() == 1 ? std::get_if<Fock>(&sp.factor(0).kind()) : nullptr;
  if (!f) fail(ErrorCode::Representation, "expected a single-mode Fock space, got " + sp.describe());
  return f->n_max;
}

// <m|D(g)|n> for m, n <= n_max, from the associated Laguerre form
// sqrt(n!/m!) g^{m-n} e^{-|g|^2/2} L_n^{(m-n)}(|g|^2), m >= n.
DenseMatrix displacement_elements_impl(cplx g, int n_max) {
  const double x = std::norm(g), lg = std::log(std::abs(g)), ph = std::arg(g);
  std::vector<double> lfact(n_max + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) lfact[n] = lfact[n - 1] + std::log(double(n));
  DenseMatrix d(n_max + 1, n_max + 1);
  std::vector<double> lag(n_max + 1);
  for (int k = 0; k <= n_max; ++k) {
    const int len = n_max - k;  // n = 0..len
    lag[0] = 1.0;
    if (len >= 1) lag[1] = 1.0 + k - x;
    for (int n = 1; n < len; ++n)
      lag[n + 1] = ((2.0 * n + 1.0 + k - x) * lag[n] - (n + k) * lag[n - 1]) / (n + 1.0);
    for (int n = 0; n <= len; ++n) {
      const int m = n + k;
      const double mag =
          x == 0.0 ? (k == 0 ? 1.0 : 0.0)
                   : std::exp(0.5 * (lfact[n] - lfact[m]) + k * lg - 0.5 * x);
      const cplx upper = std::polar(mag * lag[n], k * ph);  // <m|D|n>
      d(m, n) = upper;
      // <n|D|m> = (-1)^k conj(<m|D|n>) for m = n + k
      if (k) d(n, m) = (k % 2 == 0 ? 1.0 : -1.0) * std::conj(upper);
    }
  }
  return d;
}

}  // namespace

DenseMatrix displacement_elements(cplx beta, int n_max) {
  if (n_max < 0) fail(ErrorCode::InvalidTruncation, "n_max must be >= 0");
  return displacement_elements_impl(beta, n_max);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& target) {
  require_same_space(rho.space(), target.space());
  auto er = hermitian_eig(rho.entries());
  auto et = hermitian_eig(target.entries());
  require_psd(er.eigenvalues().minCoeff(), "state");
  require_psd(et.eigenvalues().minCoeff(), "target");
  // F = || sqrt(rho) sqrt(sigma) ||_1. Eigenvalues at roundoff level are
  // dropped first; their square roots would otherwise leak ~1e-8 into F.
  auto factor = [](const Eigen::SelfAdjointEigenSolver<DenseMatrix>& es) {
    const Eigen::VectorXd& w = es.eigenvalues();
    const double cut = 1e-14 * std::max(w.maxCoeff(), 0.0);
    std::vector<Index> keep;
    for (Index i = 0; i < w.size(); ++i)
      if (w[i] > cut) keep.push_back(i);
    DenseMatrix f(w.size(), static_cast<Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
      f.col(k) = es.eigenvectors().col(keep[k]) * std::sqrt(w[keep[k]]);
    return f;
  };
  const DenseMatrix a = factor(er), b = factor(et);
  if (a.cols() == 0 || b.cols() == 0) return 0.0;
  const DenseMatrix c = a.adjoint() * b;
  Eigen::JacobiSVD<DenseMatrix> svd(c);
  return std::clamp(svd.singularValues().sum(), 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const Ket& target, bool check_state) {
  require_same_space(rho.space(), target.space());
  if (check_state) require_psd(rho.min_eigenvalue(), "state");
  const DenseVector& v = target.amplitudes();
  const double p = v.dot(rho.entries() * v).real() / v.squaredNorm();
  return std::clamp(std::sqrt(std::max(p, 0.0)), 0.0, 1.0);
}

double fidelity(const Ket& psi, const Ket& target) {
  require_same_space(psi.space(), target.space());
  return std::clamp(std::abs(psi.inner(target)) / (psi.norm() * target.norm()), 0.0, 1.0);
}

double preparation_error(const DensityMatrix& rho, const DensityMatrix& target) {
  return 1.0 - fidelity(rho, target);
}

double preparation_error(const DensityMatrix& rho, const Ket& target, bool check_state) {
  return 1.0 - fidelity(rho, target, check_state);
}

// ---------------------------------------------------------------------------

WignerGridSpec default_wigner_grid(double alpha_abs) {
  const double r = alpha_abs + 3.0;
  return {-r, r, -r, r, 121};
}

static std::vector<double> axis(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1);
  return v;
}

std::vector<double> WignerGrid::re_axis() const { return axis(spec.re_min, spec.re_max, spec.points); }
std::vector<double> WignerGrid::im_axis() const { return axis(spec.im_min, spec.im_max, spec.points); }

double WignerGrid::integral() const {
  const int n = spec.points;
  if (n < 2) return 0.0;
  const double dx = (spec.re_max - spec.re_min) / (n - 1), dy = (spec.im_max - spec.im_min) / (n - 1);
  return values.sum() * dx * dy;
}

double WignerGrid::at_origin() const {
  auto nearest = [](const std::vector<double>& ax) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < ax.size(); ++i)
      if (std::abs(ax[i]) < std::abs(ax[best])) best = i;
    return static_cast<Index>(best);
  };
  return values(nearest(im_axis()), nearest(re_axis()));
}

WignerGrid wigner(const DensityMatrix& rho, const WignerGridSpec& grid, unsigned threads) {
  const int n_max = fock_n_max(rho.space());
  if (grid.points < 1) fail(ErrorCode::Domain, "Wigner grid needs at least one point");
  const std::vector<double> xs = axis(grid.re_min, grid.re_max, grid.points);
  const std::vector<double> ys = axis(grid.im_min, grid.im_max, grid.points);
  const double rmax = std::max({std::abs(grid.re_min), std::abs(grid.re_max),
                                std::abs(grid.im_min), std::abs(grid.im_max)});
  if (rmax * rmax > n_max)
    warn("Wigner grid reaches |beta|^2 = " + format_double(rmax * rmax) +
         ", beyond what n_max = " + std::to_string(n_max) + " resolves");

  // D(b) Pi D(b)^dag = Pi D(-2b), so W(b) = (2/pi) sum_mn rho_mn (-1)^n <n|D(-2b)|m>.
  const DenseMatrix& r = rho.entries();
  WignerGrid out;
  out.spec = grid;
  out.values.resize(static_cast<Index>(ys.size()), static_cast<Index>(xs.size()));
  const std::size_t total = xs.size() * ys.size();
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t p; (p = next.fetch_add(1)) < total;) {
      const std::size_t j = p / xs.size(), i = p % xs.size();
      const DenseMatrix d = displacement_elements(-2.0 * cplx(xs[i], ys[j]), n_max);
      double acc = 0.0;
      for (int n = 0; n <= n_max; ++n) {
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        acc += sgn * (d.row(n) * r.col(n)).value().real();
      }
      out.values(static_cast<Index>(j), static_cast<Index>(i)) = (2.0 / M_PI) * acc;
    }
  };
  const unsigned nth = std::max(1u, threads ? threads : default_thread_count());
  if (nth == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < nth; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

DensityMatrix to_bosonic(const DensityMatrix& rho) {
  const SpaceDescriptor& sp = rho.space();
  if (sp.size() != 1) fail(ErrorCode::Representation, "to_bosonic expects a single factor");
  if (std::holds_alternative<Fock>(sp.factor(0).kind())) return rho;
  if (!std::holds_alternative<Dicke>(sp.factor(0).kind()))
    fail(ErrorCode::Representation, "to_bosonic expects a Dicke or Fock factor");
  return DensityMatrix(SpaceDescriptor({Factor::fock(static_cast<int>(sp.total_dim()) - 1)}),
                       rho.entries());
}

void write_wigner(const WignerGrid& w, const std::string& csv_path, const std::string& json_path,
                  const std::string& label, double time) {
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open " + csv_path);
  for (Index j = 0; j < w.values.rows(); ++j) {
    for (Index i = 0; i < w.values.cols(); ++i)
      out << (i ? "," : "") << format_double(w.values(j, i));
    out << '\n';
  }
  out.close();
  if (!out) fail(ErrorCode::Io, "failed writing " + csv_path);
  nlohmann::ordered_json j;
  j["rows"] = "Im(beta) ascending";
  j["columns"] = "Re(beta) ascending";
  j["re_range"] = {w.spec.re_min, w.spec.re_max};
  j["im_range"] = {w.spec.im_min, w.spec.im_max};
  j["points_per_axis"] = w.spec.points;
  j["time"] = time;
  j["model"] = label;
  j["integral"] = w.integral();
  j["normalization"] = "W(beta) = (2/pi) Tr[rho D(beta) Pi D(beta)^dag]";
  write_text_file(json_path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

double parity_expectation(const DensityMatrix& rho) {
  const SpaceDescriptor& sp = rho.space();
  double p = 0.0;
  for (Index i = 0; i < sp.total_dim(); ++i)
    p += (sp.total_excitation(i) % 2 == 0 ? 1.0 : -1.0) * rho.entries()(i, i).real();
  return p;
}

double parity_expectation(const Ket& psi) {
  const SpaceDescriptor& sp = psi.space();
  double p = 0.0;
  for (Index i = 0; i < sp.total_dim(); ++i)
    p += (sp.total_excitation(i) % 2 == 0 ? 1.0 : -1.0) * std::norm(psi[i]);
  return p / psi.amplitudes().squaredNorm();
}

SparseMatrix liouvillian_matrix(const ModelSpec& model) {
  if (model.space.total_dim() > 200)
    fail(ErrorCode::MemoryGuard, "liouvillian_matrix is limited to D <= 200 (got " +
                                     std::to_string(model.space.total_dim()) + ")");
  return lindblad_superoperator(model);
}

SpectrumReport spectral_gap(const ModelSpec& model, double kernel_tol, int n_eigs) {
  const SparseMatrix l = liouvillian_matrix(model);
  SpectrumReport rep;
  // Without any dissipator fall back to the Hamiltonian scale so that
  // roundoff eigenvalues still land in the kernel.
  const double scale = model.largest_rate() > 0.0
                           ? model.largest_rate()
                           : std::max(1.0, model.hamiltonian.dense().cwiseAbs().maxCoeff());
  rep.kernel_tol = kernel_tol >= 0.0 ? kernel_tol : 1e-8 * scale;
  const Index d = model.space.total_dim();
  std::vector<cplx> ev;
  if (d <= kDenseSpectrumDim) {
    Eigen::ComplexEigenSolver<DenseMatrix> es(DenseMatrix(l), false);
    if (es.info() != Eigen::Success) fail(ErrorCode::DegenerateSpectrum, "eigensolver failed");
    ev.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  } else {
    // Shift-invert subspace iteration for the eigenvalues nearest a small
    // positive shift, i.e. the slowest modes.
    rep.complete = false;
    const Index n = l.rows();
    const int m = std::min<int>(n_eigs, static_cast<int>(n));
    const double sigma = std::max(1e-3 * model.largest_rate(), 1e-12);
    SparseMatrix shifted = l;
    for (Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success)
      fail(ErrorCode::DegenerateSpectrum, "LU factorization of the shifted Liouvillian failed");
    DenseMatrix v = DenseMatrix::Zero(n, m);
    for (int k = 0; k < m; ++k)
      for (Index i = 0; i < n; ++i) v(i, k) = cplx(std::cos(0.37 * (i + 1) * (k + 1)), std::sin(0.11 * (i + 3) * (k + 2)));
    Eigen::VectorXcd ritz, prev;
    for (int it = 0; it < 400; ++it) {
      DenseMatrix w = lu.solve(v);
      Eigen::HouseholderQR<DenseMatrix> qr(w);
      v = qr.householderQ() * DenseMatrix::Identity(n, m);
      const DenseMatrix h = v.adjoint() * (l * v);
      Eigen::ComplexEigenSolver<DenseMatrix> es(h, false);
      ritz = es.eigenvalues();
      std::vector<cplx> sorted(ritz.data(), ritz.data() + ritz.size());
      std::sort(sorted.begin(), sorted.end(),
                [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
      Eigen::VectorXcd cur = Eigen::Map<Eigen::VectorXcd>(sorted.data(), sorted.size());
      if (prev.size() == cur.size() &&
          (cur - prev).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, cur.cwiseAbs().maxCoeff()))
        break;
      prev = cur;
    }
    ev.assign(ritz.data(), ritz.data() + ritz.size());
  }
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    return std::abs(a.real()) < std::abs(b.real()) ||
           (std::abs(a.real()) == std::abs(b.real()) && a.imag() < b.imag());
  });
  rep.eigenvalues = ev;
  double gap = std::numeric_limits<double>::infinity();
  for (const cplx& z : ev) {
    if (std::abs(z.real()) < rep.kernel_tol)
      ++rep.kernel_dim;
    else
      gap = std::min(gap, std::abs(z.real()));
  }
  if (!std::isfinite(gap))
    fail(ErrorCode::DegenerateSpectrum, "no eigenvalue outside the kernel tolerance");
  rep.gap = gap;
  return rep;
}

LegCoherence leg_coherence(const DensityMatrix& rho) {
  const int n_max = fock_n_max(rho.space());
  const LinOp a = fock_destroy(n_max);
  const cplx m2 = rho.expectation(a * a);
  LegCoherence out;
  out.alpha_eff = std::sqrt(m2);
  if (std::abs(out.alpha_eff) < 1e-12) return out;
  DenseMatrix v(n_max + 1, 2);
  for (int s = 0; s < 2; ++s) {
    const cplx al = s == 0 ? out.alpha_eff : -out.alpha_eff;
    cplx c = 1.0;
    for (int n = 0; n <= n_max; ++n) {
      if (n) c *= al / std::sqrt(double(n));
      v(n, s) = c;
    }
    v.col(s).normalize();
  }
  const DenseMatrix g = v.adjoint() * v;
  const DenseMatrix gi = g.inverse();
  const DenseMatrix r = gi * (v.adjoint() * rho.entries() * v) * gi;
  const double r00 = r(0, 0).real(), r11 = r(1, 1).real();
  out.coherence = (r00 > 0.0 && r11 > 0.0) ? std::abs(r(0, 1)) / std::sqrt(r00 * r11) : 0.0;
  return out;
}

}  // namespace catsim
