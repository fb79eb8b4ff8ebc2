#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bothunt/features.hpp"

namespace bothunt::features {

std::optional<std::size_t> FeatureMatrix::row_of(UserId id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids.begin());
}

std::size_t FeatureMatrix::column(std::string_view name) const {
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (columns[j] == name) return j;
  throw std::out_of_range("no column " + std::string(name));
}

FeatureMatrix normalize(std::vector<UserId> ids, std::vector<std::string> columns, RowMatrix raw,
                        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> missing) {
  if (static_cast<std::size_t>(raw.rows()) != ids.size() ||
      static_cast<std::size_t>(raw.cols()) != columns.size() || missing.rows() != raw.rows() ||
      missing.cols() != raw.cols())
    throw std::invalid_argument("feature matrix shape mismatch");
  FeatureMatrix m;
  m.ids = std::move(ids);
  m.columns = std::move(columns);
  const auto n = raw.rows();
  const auto d = raw.cols();
  m.mean = Eigen::VectorXd::Zero(d);
  m.stddev = Eigen::VectorXd::Zero(d);
  m.z = RowMatrix::Zero(n, d);

  for (Eigen::Index j = 0; j < d; ++j) {
    double sum = 0;
    Eigen::Index present = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!missing(i, j)) {
        sum += raw(i, j);
        ++present;
      }
    const double fill = present ? sum / static_cast<double>(present) : 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (missing(i, j)) raw(i, j) = fill;
    if (n == 0) continue;
    const double mu = raw.col(j).mean();
    const double var = (raw.col(j).array() - mu).square().mean();
    const double sd = std::sqrt(var);
    m.mean(j) = mu;
    m.stddev(j) = sd;
    // relative test so large-valued constant columns still count as constant
    if (sd > 1e-12 * std::max(1.0, std::abs(mu))) m.z.col(j) = (raw.col(j).array() - mu) / sd;
  }
  m.raw = std::move(raw);
  m.missing = std::move(missing);
  return m;
}

std::string to_csv(const FeatureMatrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << "user_id";
  for (const auto& c : m.columns) os << ',' << c;
  os << '\n';
  for (std::size_t i = 0; i < m.ids.size(); ++i) {
    os << m.ids[i];
    for (std::size_t j = 0; j < m.columns.size(); ++j) {
      os << ',';
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(j);
      if (!m.missing(r, c)) os << m.raw(r, c);
    }
    os << '\n';
  }
  return os.str();
}

namespace {
std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}
}  // namespace

FeatureMatrix from_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("features csv: empty input");
  auto header = split_commas(line);
  if (header.empty() || header[0] != "user_id") throw std::runtime_error("features csv: first column must be user_id");
  std::vector<std::string> columns(header.begin() + 1, header.end());

  std::vector<std::pair<UserId, std::vector<std::optional<double>>>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_commas(line);
    if (cells.size() != header.size())
      throw std::runtime_error("features csv line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells");
    UserId id = 0;
    auto [p, ec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), id);
    if (ec != std::errc{} || p != cells[0].data() + cells[0].size())
      throw std::runtime_error("features csv line " + std::to_string(line_no) + ": bad user_id");
    std::vector<std::optional<double>> values;
    for (std::size_t j = 1; j < cells.size(); ++j) {
      if (cells[j].empty()) {
        values.emplace_back();
        continue;
      }
      try {
        std::size_t used = 0;
        values.emplace_back(std::stod(cells[j], &used));
        if (used != cells[j].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw std::runtime_error("features csv line " + std::to_string(line_no) + ": bad value '" +
                                 cells[j] + "'");
      }
    }
    rows.emplace_back(id, std::move(values));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(columns.size());
  RowMatrix raw = RowMatrix::Zero(n, d);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> missing(n, d);
  missing.setConstant(false);
  std::vector<UserId> ids;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& [id, values] = rows[static_cast<std::size_t>(i)];
    if (!ids.empty() && ids.back() == id) throw std::runtime_error("features csv: duplicate user " + std::to_string(id));
    ids.push_back(id);
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& v = values[static_cast<std::size_t>(j)];
      if (v)
        raw(i, j) = *v;
      else
        missing(i, j) = true;
    }
  }
  return normalize(std::move(ids), std::move(columns), std::move(raw), std::move(missing));
}

}  // namespace bothunt::features
