#pragma once

#include <array>
#include <string>

#include "essclose/setmodel.hpp"

namespace essclose {

/// Parameters of the dyadic-grid closure operator. The continuum definition
/// quantifies over all open neighborhoods; the grid engine samples a finite
/// schedule of window radii and replaces "positive measure" by a threshold,
/// so the result is an approximation by construction.
struct GridClosureParams {
  int d = 1;
  std::vector<Rat> rho_schedule{Rat(1, 8), Rat(1, 16), Rat(1, 32)};
  // Threshold between the projected mass of an isolated cell (<= 1/32 for
  // L >= 5) and of a line sweeping the smallest window (>= 1/16). The
  // comparison is inclusive (>= tau). Calibrated for d = 1 checks; smaller
  // tau is needed for d >= 2 at fine levels.
  Rat tau{3, 64};
};

/// Exact d-essential closure on the symbolic class. d = 0 is the topological
/// closure (every piece survives as its closed Full piece); for d >= 1 a Full
/// piece survives iff some d-subset of axes sees its direction space at full
/// rank, and Null pieces vanish (countable sets project to null sets).
TaggedPieceSet essential_closure_exact(const TaggedPieceSet& S, int d);

/// Grid approximation: cell c survives radius rho iff some axis subset W of
/// size d gives grid_measure(project_grid(window_rho(c) & A, W)) >= tau; the
/// result is the intersection over the schedule. d = 0 keeps any cell whose
/// window meets A.
DyadicGridSet essential_closure_grid(const DyadicGridSet& A, const GridClosureParams& params);

bool is_essentially_closed(const TaggedPieceSet& S, int d);

/// Diagnostic interior on grids: cells whose full 1-neighborhood lies in A.
DyadicGridSet grid_interior(const DyadicGridSet& A);

struct ProjectionReport {
  AxisSet W;
  Rat measure;
  bool positive = false;
};

/// Both routes of the emptiness criterion: the closure operator itself, and
/// the direct per-subspace projection measures. They must agree; `agree`
/// false indicates an engine bug.
struct EmptyClosureReport {
  bool closure_empty = false;
  bool all_projections_null = false;
  bool agree = false;
  std::vector<ProjectionReport> per_subspace;

  bool value() const { return closure_empty; }
};

EmptyClosureReport empty_closure_criterion(const TaggedPieceSet& S, int d);

struct PropertyVerdict {
  bool pass = true;
  std::string witness;  // nonempty exactly when pass is false
};

/// Verdicts for the seven structural properties of the closure operator,
/// evaluated exactly on the symbolic engine:
///   1 closure output is a closed set
///   2 nesting: closure_d subset of closure_e subset of topological closure
///   3 closure of the interior is contained in every closure
///   4 monotone under set inclusion (requires A subset of B)
///   5 distributes over union
///   6 emptiness criterion routes agree
///   7 idempotent
struct PropertyReport {
  std::array<PropertyVerdict, 7> items;

  bool all_pass() const {
    for (const auto& v : items)
      if (!v.pass) return false;
    return true;
  }
};

PropertyReport check_properties(const TaggedPieceSet& A, const TaggedPieceSet& B, int d, int e);

}  // namespace essclose
