#pragma once

#include <random>

#include "parpush/hurwitz.hpp"
#include "parpush/pushforward.hpp"

namespace parpush {

/// Bounds for randomly generated desk-scale instances.
struct InstanceParams {
  int max_degree = 4;
  long long max_rank = 3;
  int max_base_genus = 2;
  int max_marked_points = 3;
  int max_denominator = 4;
  long long max_abs_degree = 3;
};

using Rng = std::mt19937_64;

Permutation random_permutation(Rng& rng, int n);

/// Valid Hurwitz data: random handles and branch permutations, the last
/// branch permutation solving the monodromy relation. Some permutations
/// are drawn as the identity so that unramified and disconnected covers
/// occur.
CoveringMonodromy random_covering(Rng& rng, const InstanceParams& params);

/// Random strictly increasing weights in [0, 1) with denominators bounded
/// by params.max_denominator, on a random composition of `rank`.
WeightedFlag random_flag(Rng& rng, long long rank, const InstanceParams& params);

UpstairsBundle random_upstairs(Rng& rng, const CoveringMonodromy& covering, const InstanceParams& params);

/// Residues equal to the weights at every flagged point.
UpstairsResidues parabolic_residues(const UpstairsBundle& u);

/// Re-draws one flag per component so that the weighted trace of each
/// component is an integer, then sets degree = -trace. Afterwards the
/// parabolic residues satisfy Ohtsuki's identity and par_deg = 0.
UpstairsBundle make_ohtsuki_consistent(Rng& rng, UpstairsBundle u);

/// Scalar residues that differ from the weights by random integers.
UpstairsResidues shifted_residues(Rng& rng, const UpstairsBundle& u);

}  // namespace parpush
