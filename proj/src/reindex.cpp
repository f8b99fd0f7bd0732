#include "seqebh/reindex.hpp"

#include <string>

#include "seqebh/errors.hpp"

namespace seqebh {

std::vector<std::vector<double>> reindex(const std::vector<std::vector<std::size_t>>& schedule,
                                         const std::vector<std::vector<double>>& local_values) {
  if (schedule.size() != local_values.size()) {
    throw InputError("reindex: schedule and value streams differ in count");
  }
  if (schedule.empty()) return {};
  const std::size_t ticks = schedule.front().size();
  std::vector<std::vector<double>> out(ticks, std::vector<double>(schedule.size()));
  for (std::size_t g = 0; g < schedule.size(); ++g) {
    if (schedule[g].size() != ticks) {
      throw InputError("reindex: every stream needs one block per global tick");
    }
    std::size_t consumed = 0;
    for (std::size_t k = 0; k < ticks; ++k) {
      if (schedule[g][k] == 0) throw InputError("reindex: block sizes must be positive");
      consumed += schedule[g][k];
      if (consumed > local_values[g].size()) {
        throw InputError("reindex: stream " + std::to_string(g + 1) + " needs " +
                         std::to_string(consumed) + " local values but has " +
                         std::to_string(local_values[g].size()));
      }
      out[k][g] = local_values[g][consumed - 1];
    }
  }
  return out;
}

}  // namespace seqebh
