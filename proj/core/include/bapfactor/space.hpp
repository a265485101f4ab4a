#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "bapfactor/errors.hpp"

namespace bapfactor {

enum class NormTag { L1, L2, Linf };

std::string to_string(NormTag tag);
NormTag tag_from_string(const std::string& s);

/// A finite-dimensional real vector space carrying one of the three norms.
struct NormedSpace {
  int dim = 0;
  NormTag tag = NormTag::L2;

  NormedSpace() = default;
  NormedSpace(int d, NormTag t) : dim(d), tag(t) {
    if (d < 1) throw InputError("NormedSpace: dim must be >= 1");
  }

  bool operator==(const NormedSpace& o) const { return dim == o.dim && tag == o.tag; }
  bool operator!=(const NormedSpace& o) const { return !(*this == o); }
};

struct Vec {
  Eigen::VectorXd coords;
  NormedSpace space;

  Vec() = default;
  Vec(Eigen::VectorXd c, NormedSpace s) : coords(std::move(c)), space(s) {
    if (coords.size() != space.dim) throw InputError("Vec: coordinate count != space dim");
    if (!coords.allFinite()) throw InputError("Vec: non-finite coordinate");
  }
};

/// Acts on a Vec of the same space by the standard pairing f(x) = f.coords . x.coords.
struct Functional {
  Eigen::VectorXd coords;
  NormedSpace space;

  Functional() = default;
  Functional(Eigen::VectorXd c, NormedSpace s) : coords(std::move(c)), space(s) {
    if (coords.size() != space.dim) throw InputError("Functional: coordinate count != space dim");
    if (!coords.allFinite()) throw InputError("Functional: non-finite coordinate");
  }

  double operator()(const Vec& x) const {
    if (x.space != space) throw InputError("Functional: space mismatch");
    return coords.dot(x.coords);
  }
};

// Scale-invariant rank tolerance: 1e-10 times the largest column norm.
inline constexpr double kRankTolFactor = 1e-10;
inline constexpr double kTolLp = 1e-9;

/// k linearly independent columns spanning a subspace of an ambient space,
/// carrying the ambient norm restricted to the span. Rank-deficient input is
/// rejected at construction.
class SubspaceBasis {
 public:
  SubspaceBasis(NormedSpace ambient, Eigen::MatrixXd columns);

  const NormedSpace& ambient() const { return ambient_; }
  int ambient_dim() const { return ambient_.dim; }
  int dim() const { return static_cast<int>(cols_.cols()); }
  const Eigen::MatrixXd& columns() const { return cols_; }

  /// Ambient vector for subspace coordinates c.
  Vec embed(const Eigen::VectorXd& c) const;

 private:
  NormedSpace ambient_;
  Eigen::MatrixXd cols_;
};

double norm(const NormedSpace& space, const Vec& v);
double norm(const Vec& v);
double norm(const NormedSpace& space, const Eigen::VectorXd& coords);

double dual_norm(const NormedSpace& space, const Functional& f);
double dual_norm(const Functional& f);

struct SupportResult {
  Vec maximizer;        // ambient coordinates, induced norm <= 1
  double value = 0.0;   // f(maximizer)
  bool degenerate = false;
  Eigen::VectorXd sub_coords;  // subspace coordinates of the maximizer (empty without sub)
};

/// Maximize f over the unit ball, optionally restricted to span(sub).
/// Exact closed form for the unrestricted call; LP (L1/Linf) or closed-form
/// projection (L2) over the polytope/ellipsoid section otherwise.
SupportResult support_maximize(const NormedSpace& space, const Functional& f,
                               const SubspaceBasis* sub = nullptr);

/// Same maximization with the functional given directly in subspace
/// coordinates: maximize g.c over {c : ||sub.columns()*c|| <= 1}.
SupportResult support_maximize_coords(const Eigen::VectorXd& g, const SubspaceBasis& sub);

}  // namespace bapfactor
