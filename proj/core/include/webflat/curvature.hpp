// Curvature of dual webs evaluated numerically, and flatness certification by
// generic sampling plus probing toward the discriminant.
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "webflat/numeric.hpp"
#include "webflat/webleg.hpp"

namespace webflat::curv {

using Cplx = std::complex<double>;
using num::Cx;
using num::DoubleDouble;

/// A point (p, q) of the dual chart.
struct DualPoint {
  Cplx p;
  Cplx q;
};

/// Second-order data of the coefficients of G(p, q, x) at a fixed (p, q).
template <class T>
struct CoeffJet {
  std::vector<Cx<T>> c, cp, cq, cpp, cpq, cqq;  // indexed by the power of x
};

/// G and its partials up to order two at (p, q, x).
template <class T>
struct GPartials {
  Cx<T> g, gx, gp, gq, gxx, gxp, gxq, gpp, gpq, gqq;
  double g_scale = 0.0;  // sum of |c_k| max(1, |x|)^k
};

/// A dual implicit web G(p, q, x), kept as a product of factors and
/// compiled for repeated floating evaluation. Roots are found factor by
/// factor, so that clusters of slopes coming from different members of a web
/// do not degrade each other.
class DualWeb {
 public:
  /// A single factor. Throws std::invalid_argument unless the web is in the
  /// dual convention.
  explicit DualWeb(const web::ImplicitWeb& W);
  /// The product of the given factors over {p, q, x}.
  explicit DualWeb(const std::vector<poly::MPoly>& factors);
  /// The dual factors of a web, one per line or foliation.
  static DualWeb of(const web::WebSpec& W) { return DualWeb(web::legendre_factors(W)); }

  int degree() const { return degree_; }
  int factor_count() const { return static_cast<int>(factors_.size()); }
  int factor_degree(int f) const { return static_cast<int>(factors_[f].terms.size()) - 1; }
  /// The expanded product.
  const poly::MPoly& poly() const { return poly_; }

  template <class T>
  CoeffJet<T> coefficient_jet(int factor, Cplx p, Cplx q) const;
  template <class T>
  static GPartials<T> partials(const CoeffJet<T>& jet, Cx<T> x);

 private:
  struct CTerm {
    Cx<double> c53;
    Cx<DoubleDouble> c106;
    int ep = 0;
    int eq = 0;
  };
  struct Factor {
    std::vector<std::vector<CTerm>> terms;  // by power of x
    int max_p = 0;
    int max_q = 0;
  };
  void add_factor(const poly::MPoly& f);

  poly::MPoly poly_;
  std::vector<Factor> factors_;
  int degree_ = 0;
};

/// A recoverable failure to solve for the slopes at a point.
class SlopeError : public std::runtime_error {
 public:
  enum class Kind { resample, near_discriminant };
  SlopeError(Kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// The slopes m_i = dq/dp = -x_i of the local foliations at a point.
template <class T>
struct SlopeFanT {
  DualPoint base;
  std::vector<Cx<T>> slopes;
  std::vector<std::array<Cx<T>, 2>> first_partials;   // (m_p, m_q)
  std::vector<std::array<Cx<T>, 3>> second_partials;  // (m_pp, m_pq, m_qq)
  std::vector<double> residuals;                      // |G| / g_scale at each root
  double separation = 0.0;                            // min |x_i - x_j| / (1 + max |x|)
  double root_sum_residual = 0.0;                     // worst |sum x_i + c_{n-1}/c_n| per factor, relative
};
using SlopeFan = SlopeFanT<DoubleDouble>;

inline constexpr double kClusterTol = 1e-6;
/// Double-double roots stay well conditioned much closer to a collision.
inline constexpr double kClusterTolExtended = 1e-12;
template <class T>
constexpr double cluster_tolerance() {
  return std::is_same_v<T, double> ? kClusterTol : kClusterTolExtended;
}
inline constexpr double kRootTol = 1e-12;

/// Throws SlopeError on a degree drop ("resample") or clustered roots
/// ("near-discriminant").
template <class T>
SlopeFanT<T> slopes_at(const DualWeb& W, const DualPoint& P, std::uint64_t seed = 0x51093);

/// eta = A dp + B dq for the 3-subweb {i, j, k}.
template <class T>
struct EtaFormT {
  std::array<int, 3> triple{};
  Cx<T> A, B;
  double consistency_residual = 0.0;  // relative to the size of the equation
};

/// Throws std::domain_error when two of the slopes coincide.
template <class T>
EtaFormT<T> eta_for_triple(const SlopeFanT<T>& fan, std::array<int, 3> triple);

/// Curvature assembled from a fan without any cross-validation.
struct FanCurvature {
  Cplx K;
  /// Median over triples of |dB/dp| + |dA/dq|, the magnitude of the terms
  /// whose cancellation produces K.
  double scale = 0.0;
  double eta_residual = 0.0;  // worst consistency residual
  std::vector<Cplx> per_triple;
};

template <class T>
FanCurvature curvature_of_fan(const SlopeFanT<T>& fan);

/// Sum over triples of eta, the 1-form whose exterior derivative is K dp^dq.
template <class T>
std::array<Cx<T>, 2> eta_sum(const SlopeFanT<T>& fan);

struct CurvatureOptions {
  int precision_bits = 106;  // 53 or 106
  bool cross_validate = true;
  double agreement = 1e-6;   // analytic vs Richardson, relative to scale
  std::uint64_t seed = 0x51093;
};

struct CurvatureSample {
  DualPoint point;
  Cplx K;
  double scale = 0.0;
  double separation = 0.0;
  double root_residual = 0.0;
  double eta_residual = 0.0;
  double fd_discrepancy = -1.0;  // |K - K_fd| / scale, -1 when not computed
  bool reliable = false;
  std::string note;  // failure reason, empty when the sample is usable

  double relative() const { return scale > 0.0 ? std::abs(K) / scale : (std::abs(K) == 0.0 ? 0.0 : 1e300); }
};

/// Never throws on numerical trouble: failures are recorded in the sample.
CurvatureSample curvature_at(const DualWeb& W, const DualPoint& P, const CurvatureOptions& opts = {});

enum class FlatStatus { flat_consistent, non_flat, inconclusive };
std::string to_string(FlatStatus s);

struct FlatnessConfig {
  int samples = 200;
  std::uint64_t seed = 20240611;
  double flat_tol = 1e-8;
  double nonflat_floor = 1e-4;
  int probe_decades = 4;  // distances 1e-2, ..., 1e-(1+decades)
  int precision_bits = 106;
  bool cross_validate = true;
  /// Work in a random exact projective frame drawn from the seed.
  bool random_frame = true;
};

struct Probe {
  std::string component;
  DualPoint base;
  Cplx direction;
  std::vector<double> distances;
  std::vector<CurvatureSample> samples;
  double growth_per_decade = 0.0;  // geometric mean of |K| ratios
  bool bounded = false;
  bool pole = false;
  bool resolved = false;  // enough reliable points to judge
};

struct FlatnessVerdict {
  FlatStatus status = FlatStatus::inconclusive;
  std::vector<CurvatureSample> samples;
  std::vector<Probe> probes;
  double flat_tol = 0.0;
  double nonflat_floor = 0.0;
  std::uint64_t seed = 0;
  int precision_bits = 0;
  int rejected = 0;  // generic candidates thrown away near the discriminant
  std::optional<std::size_t> witness;  // index into samples
  std::string reason;
};

FlatnessVerdict flatness_test(const web::WebSpec& W, const FlatnessConfig& config = {});

/// Compares lambda^2 kappa(a, b) with kappa(a/lambda, b/lambda) in the chart of
/// lines a x + b y = 1, for webs made of homogeneous foliations and lines
/// through the origin. Throws std::invalid_argument for other members.
struct HomothetyCheck {
  double relative_error = 0.0;
  Cplx kappa;         // at (a, b)
  Cplx kappa_scaled;  // at (a/lambda, b/lambda)
};
HomothetyCheck homothety_scaling_check(const web::WebSpec& W, Cplx a, Cplx b, Cplx lambda,
                                       const CurvatureOptions& opts = {});

/// Evaluates both sides of the expansion of K(l_1 x ... x l_k x W'') into
/// curvatures of sub-webs containing at most two of the lines. `parts` are
/// k single-line webs followed by W''. `perturb` shifts one slope of the
/// left-hand side (a negative control).
struct ExpansionCheck {
  double residual = 0.0;  // |LHS - RHS| / scale
  Cplx lhs, rhs;
};
ExpansionCheck curvature_expansion_check(const std::vector<web::WebSpec>& parts, const DualPoint& P,
                                         double perturb = 0.0, const CurvatureOptions& opts = {});

}  // namespace webflat::curv
