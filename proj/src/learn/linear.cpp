#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "bothunt/learn.hpp"
#include "bothunt/random.hpp"

namespace bothunt::learn {

double LinearModel::margin(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  if (x.size() != weights.size())
    throw LearnError("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                     std::to_string(weights.size()));
  return x.dot(weights.transpose()) + bias;
}

double predict_prob(const LinearModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  const double m = model.margin(x);
  // split by sign so exp never overflows
  if (m >= 0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

LinearModel train_linear(const features::RowMatrix& x, const std::vector<int>& y,
                         std::vector<std::string> columns, const LinearConfig& cfg) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (y.size() != n) throw LearnError("label count does not match rows");
  if (!columns.empty() && columns.size() != static_cast<std::size_t>(x.cols()))
    throw LearnError("column names do not match matrix width");
  std::size_t pos = 0, neg = 0;
  for (int v : y) {
    if (v == 1)
      ++pos;
    else if (v == -1)
      ++neg;
    else
      throw LearnError("labels must be +1 or -1");
  }
  if (pos == 0 || neg == 0) throw LearnError("training set needs both classes");
  if (cfg.epochs < 1 || !(cfg.lambda > 0)) throw LearnError("epochs and lambda must be positive");

  LinearModel model;
  model.columns = std::move(columns);
  model.config = cfg;
  model.weights = Eigen::VectorXd::Zero(x.cols());
  const double w_pos = cfg.balance_classes ? static_cast<double>(n) / (2.0 * static_cast<double>(pos)) : 1.0;
  const double w_neg = cfg.balance_classes ? static_cast<double>(n) / (2.0 * static_cast<double>(neg)) : 1.0;

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t t = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (auto i : order) {
      ++t;
      const double eta = 1.0 / (cfg.lambda * static_cast<double>(t));
      const auto row = x.row(static_cast<Eigen::Index>(i));
      const double yi = y[i];
      const double m = yi * (row.dot(model.weights.transpose()) + model.bias);
      model.weights *= 1.0 - eta * cfg.lambda;
      model.bias *= 1.0 - eta * cfg.lambda;
      if (m < 1.0) {
        const double c = yi > 0 ? w_pos : w_neg;
        model.weights += (eta * c * yi) * row.transpose();
        model.bias += eta * c * yi;
      }
    }
  }
  return model;
}

std::string model_to_text(const LinearModel& model) {
  std::ostringstream out;
  out.precision(17);
  out << "# linear model: epochs " << model.config.epochs << " lambda " << model.config.lambda
      << " balance " << (model.config.balance_classes ? 1 : 0) << " seed " << model.config.seed << '\n';
  out << "bias " << model.bias << '\n';
  for (Eigen::Index j = 0; j < model.weights.size(); ++j) {
    const auto name = static_cast<std::size_t>(j) < model.columns.size() ? model.columns[static_cast<std::size_t>(j)]
                                                                          : "w" + std::to_string(j);
    out << name << ' ' << model.weights(j) << '\n';
  }
  return out.str();
}

void save_model(const LinearModel& model, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw LearnError("cannot write " + file.string());
  out << model_to_text(model);
}

LinearModel load_model(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw LearnError("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_text(ss.str());
}

LinearModel model_from_text(const std::string& text) {
  std::istringstream in(text);
  LinearModel model;
  std::vector<double> w;
  std::string line;
  bool have_bias = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string tok;
      while (ls >> tok) {
        if (tok == "epochs") ls >> model.config.epochs;
        else if (tok == "lambda") ls >> model.config.lambda;
        else if (tok == "seed") ls >> model.config.seed;
        else if (tok == "balance") {
          int b = 1;
          ls >> b;
          model.config.balance_classes = b != 0;
        }
      }
      continue;
    }
    std::string name;
    double value = 0;
    if (!(ls >> name >> value)) throw LearnError("bad model line: " + line);
    if (name == "bias" && !have_bias) {
      model.bias = value;
      have_bias = true;
    } else {
      model.columns.push_back(name);
      w.push_back(value);
    }
  }
  if (!have_bias) throw LearnError("model file has no bias line");
  model.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  return model;
}

}  // namespace bothunt::learn
