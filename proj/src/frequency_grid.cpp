#include "pkrg/frequency_grid.hpp"

#include <map>
#include <mutex>

namespace pkrg {

std::shared_ptr<const FrequencyGrid::Tables> FrequencyGrid::table_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const Tables>> cache;

  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  auto tables = std::make_shared<Tables>();
  const Eigen::Index size = static_cast<Eigen::Index>(n) * n * n;
  tables->kk.resize(size);
  Eigen::Index idx = 0;
  for (int i1 = 0; i1 < n; ++i1) {
    const Real k1 = i1 <= n / 2 ? i1 : i1 - n;
    for (int i2 = 0; i2 < n; ++i2) {
      const Real k2 = i2 <= n / 2 ? i2 : i2 - n;
      for (int i3 = 0; i3 < n; ++i3, ++idx) {
        const Real k3 = i3 <= n / 2 ? i3 : i3 - n;
        tables->kk[idx] = k1 * k1 + k2 * k2 + k3 * k3;
      }
    }
  }
  cache.emplace(n, tables);
  return tables;
}

}  // namespace pkrg
