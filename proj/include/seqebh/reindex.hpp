#pragma once

#include <cstddef>
#include <vector>

namespace seqebh {

/// Synchronises asynchronous streams by natural time. schedule[g][k] is the
/// number of local observations stream g contributes in global tick k;
/// local_values[g][i] is the local process value after i+1 observations.
/// Returns rows indexed by global tick, columns by stream:
///   out[k][g] = local_values[g][c - 1],  c = schedule[g][0] + ... + schedule[g][k].
/// Throws InputError on zero block sizes, ragged schedules, or overruns.
std::vector<std::vector<double>> reindex(const std::vector<std::vector<std::size_t>>& schedule,
                                         const std::vector<std::vector<double>>& local_values);

}  // namespace seqebh
