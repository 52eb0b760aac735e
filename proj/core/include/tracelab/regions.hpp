#pragma once

#include <string>

#include "tracelab/functionals.hpp"
#include "tracelab/rational.hpp"

namespace tcl::regions {

// Classification of an exponent point against the proven convexity /
// concavity regions. Every verdict carries a short rule tag naming the
// covering region (or the gap between necessity and sufficiency).
enum class Status {
  proven_convex,
  proven_concave,
  proven_not_convex,
  proven_not_concave,
  open_convexity,
};

const char* status_name(Status s);

struct RegionVerdict {
  Status status;
  std::string justification;
};

// Joint convexity of (A, B) -> Tr[(A^{q/2} B^p A^{q/2})^s]. The region is
// symmetric under p <-> q (cyclicity of the trace), and the classifier
// checks both orientations. Double overloads compare with a relative slack
// of kRegionTol; Rational overloads are exact, so boundary points land on
// the closed side deterministically.
RegionVerdict classify_convexity(const ParamPoint& prm);
RegionVerdict classify_convexity(const Rational& p, const Rational& q,
                                 const Rational& s);

// Joint concavity of the same functional. The concave region is completely
// characterized, so no open verdicts arise.
RegionVerdict classify_concavity(const ParamPoint& prm);
RegionVerdict classify_concavity(const Rational& p, const Rational& q,
                                 const Rational& s);

struct MapVerdicts {
  RegionVerdict convexity;
  RegionVerdict concavity;
};

// Joint operator convexity/concavity of (A, B) -> A^{q/2} B^p A^{q/2}
// as a matrix-valued map. Both directions are completely characterized:
// convex exactly when q = 2 and -1 <= p < 0, concave never.
MapVerdicts classify_operator_map(double p, double q);
MapVerdicts classify_operator_map(const Rational& p, const Rational& q);

struct TripleVerdicts {
  RegionVerdict convexity;
  RegionVerdict concavity;
};

// Joint convexity/concavity of (A, B, C) -> Tr[A^{q/2} B^p A^{q/2} C^r]:
// convex exactly when q = 2, p < 0, r < 0 and p + r >= -1, concave never.
TripleVerdicts classify_triple(const TripleParams& prm);
TripleVerdicts classify_triple(const Rational& p, const Rational& q,
                               const Rational& r);

inline constexpr double kRegionTol = 1e-12;

}  // namespace tcl::regions
