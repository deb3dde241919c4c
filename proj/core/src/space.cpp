#include "lpi/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lpi/error.hpp"

namespace lpi {

Space Space::make(std::vector<Cell> cells, double p) {
  if (!std::isfinite(p)) throw Error(Errc::NonFiniteValue, "exponent is not finite");
  if (p < 1.0) throw Error(Errc::BadExponent, "p = " + std::to_string(p) + " < 1");
  auto data = std::make_shared<Data>();
  data->p = p;
  data->index.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    if (!std::isfinite(c.weight)) throw Error(Errc::NonFiniteValue, "weight of cell '" + c.id + "'");
    if (c.weight <= 0.0) throw Error(Errc::NonPositiveWeight, "cell '" + c.id + "'");
    if (!data->index.emplace(c.id, i).second) throw Error(Errc::DuplicateId, "cell '" + c.id + "'");
  }
  data->cells = std::move(cells);
  return Space(std::move(data));
}

double Space::total_weight() const noexcept {
  return std::accumulate(data_->cells.begin(), data_->cells.end(), 0.0,
                         [](double acc, const Cell& c) { return acc + c.weight; });
}

std::optional<std::size_t> Space::find(std::string_view id) const {
  auto it = data_->index.find(std::string(id));
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t Space::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw Error(Errc::UnknownCell, "'" + std::string(id) + "'");
}

bool Space::same_as(const Space& other) const noexcept {
  if (data_ == other.data_) return true;
  if (data_->p != other.data_->p || data_->cells.size() != other.data_->cells.size()) return false;
  return std::equal(data_->cells.begin(), data_->cells.end(), other.data_->cells.begin(),
                    [](const Cell& a, const Cell& b) { return a.id == b.id && a.weight == b.weight; });
}

Space Space::with_exponent(double p) const { return make(data_->cells, p); }

void require_same_space(const Space& a, const Space& b, std::string_view context) {
  if (!a.same_as(b)) throw Error(Errc::SpaceMismatch, std::string(context));
}

CellSet cell_set_from_ids(const Space& space, std::span<const std::string> ids) {
  CellSet out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(space.index_of(id));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace lpi
