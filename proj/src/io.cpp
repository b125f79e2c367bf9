#include "netcs/io.hpp"

#include "netcs/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace netcs {

namespace {

Json element_json(const TransferElement& e) {
  if (e.is_zero()) return nullptr;
  return Json{{"g", e.gain}, {"a", e.pole}};
}

TransferElement element_from(const Json& j) {
  if (j.is_null()) return {};
  return {j.at("g").get<double>(), j.at("a").get<double>()};
}

std::vector<int> one_based(const std::vector<int>& idx) {
  std::vector<int> out;
  for (int i : idx) out.push_back(i + 1);
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json network_to_json(const Network& net) {
  Json q = Json::array();
  for (const auto& row : net.Q) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(element_json(e));
    q.push_back(std::move(r));
  }
  Json p = Json::array();
  for (int i = 0; i < net.p; ++i) p.push_back(element_json(net.P[i][i]));
  Json j{{"p", net.p}, {"k", net.k}, {"Q", q}, {"P", p}};
  if (net.rescale) j["rescale"] = *net.rescale;
  return j;
}

Network network_from_json(const Json& j) {
  try {
    const int p = j.at("p").get<int>();
    if (p < 1) throw ParameterError("network JSON: p must be positive");
    Network net = Network::zeros(p, j.at("k").get<int>());
    const Json& q = j.at("Q");
    const Json& pd = j.at("P");
    if (q.size() != static_cast<size_t>(p) || pd.size() != static_cast<size_t>(p))
      throw ParameterError("network JSON: Q must have p rows and P p entries");
    for (int i = 0; i < p; ++i) {
      if (q[i].size() != static_cast<size_t>(p)) throw ParameterError("network JSON: ragged Q");
      for (int c = 0; c < p; ++c) net.Q[i][c] = element_from(q[i][c]);
      net.P[i][i] = element_from(pd[i]);
    }
    if (j.contains("rescale")) net.rescale = j.at("rescale").get<double>();
    return net;
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("network JSON: ") + e.what());
  }
}

Json plans_to_json(const std::vector<ExperimentPlan>& plans) {
  Json arr = Json::array();
  for (const auto& plan : plans)
    arr.push_back({{"inputs", one_based(plan.inputs)}, {"magnitudes", plan.magnitudes}});
  return Json{{"plans", arr}};
}

std::vector<ExperimentPlan> plans_from_json(const Json& j) {
  try {
    std::vector<ExperimentPlan> plans;
    for (const auto& item : j.at("plans")) {
      ExperimentPlan plan;
      for (int i : item.at("inputs").get<std::vector<int>>()) plan.inputs.push_back(i - 1);
      if (item.contains("magnitudes"))
        plan.magnitudes = item.at("magnitudes").get<std::vector<double>>();
      else
        plan.magnitudes.assign(plan.inputs.size(), 1.0);
      plans.push_back(std::move(plan));
    }
    return plans;
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("plan JSON: ") + e.what());
  }
}

std::string matrix_to_csv(const Matrix& a) {
  std::string out;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) out += ',';
      out += format_double(a(i, j));
    }
    out += '\n';
  }
  return out;
}

Matrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ParameterError("CSV: cannot parse '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ParameterError("CSV: ragged rows");
    rows.push_back(std::move(row));
  }
  Matrix a(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows[0].size()));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) = rows[i][j];
  return a;
}

void save_dataset(const DataSet& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "Y.csv", matrix_to_csv(data.Y));
  write_file(dir / "U.csv", matrix_to_csv(data.U));
  write_file(dir / "plans.json", plans_to_json(data.plans).dump(2) + "\n");
}

DataSet load_dataset(const std::filesystem::path& dir) {
  DataSet data;
  data.Y = matrix_from_csv(read_file(dir / "Y.csv"));
  data.U = matrix_from_csv(read_file(dir / "U.csv"));
  if (data.Y.rows() != data.U.rows() || data.Y.cols() != data.U.cols())
    throw ParameterError("data set: Y and U shapes differ");
  if (data.Y.cols() < 1) throw ParameterError("data set: no experiments");
  const auto plans_path = dir / "plans.json";
  data.usage.assign(static_cast<size_t>(data.Y.rows()), 0);
  if (std::filesystem::exists(plans_path)) {
    data.plans = plans_from_json(Json::parse(read_file(plans_path)));
    if (static_cast<Index>(data.plans.size()) != data.Y.cols())
      throw ParameterError("data set: plan count does not match the number of columns");
  } else {
    // Reconstruct plans from the support of U.
    for (Index j = 0; j < data.U.cols(); ++j) {
      ExperimentPlan plan;
      for (Index i = 0; i < data.U.rows(); ++i)
        if (data.U(i, j) != 0.0) {
          plan.inputs.push_back(static_cast<int>(i));
          plan.magnitudes.push_back(data.U(i, j));
        }
      data.plans.push_back(std::move(plan));
    }
  }
  for (const auto& plan : data.plans)
    for (int i : plan.inputs) {
      if (i < 0 || i >= data.p()) throw ParameterError("data set: plan input out of range");
      ++data.usage[i];
    }
  return data;
}

Json to_json(const UniquenessReport& report, const std::vector<int>& col_map) {
  Json j{{"unique", report.unique()},
         {"m_ok", report.m_ok},
         {"a2_full_rank", report.a2_full_rank},
         {"all_subsets_ok", report.all_subsets_ok},
         {"checked_subsets", report.checked_subsets},
         {"deficient_subset", nullptr}};
  if (report.deficient_subset) {
    std::vector<int> states;
    for (int c : *report.deficient_subset)
      states.push_back(col_map.empty() ? c + 1 : col_map[c] + 1);
    j["deficient_subset"] = states;
  }
  return j;
}

Json to_json(const RecoveryResult& r) {
  std::vector<double> x1(r.x1.data(), r.x1.data() + r.x1.size());
  return Json{{"row", r.row + 1},         {"method", to_string(r.method)},
              {"x1", x1},                 {"x2", r.x2},
              {"support", one_based(r.support)}, {"residual", r.residual},
              {"certificate", to_json(r.certificate)}};
}

Json to_json(const RowReport& report) {
  Json j{{"row", report.row + 1},
         {"status", to_string(report.status)},
         {"method", to_string(report.method)},
         {"certificate", to_json(report.certificate)}};
  j["result"] = report.result ? to_json(*report.result) : Json(nullptr);
  Json alts = Json::array();
  for (const auto& a : report.alternatives) alts.push_back(to_json(a));
  j["alternatives"] = alts;
  if (!report.error.empty()) j["error"] = report.error;
  return j;
}

Json to_json(const StructurePattern& pattern) {
  Json rows = Json::array();
  for (int i = 0; i < pattern.rows; ++i) {
    std::string row;
    for (int c = 0; c < pattern.cols; ++c) row += static_cast<char>(pattern(i, c));
    rows.push_back(row);
  }
  return Json{{"rows", pattern.rows}, {"cols", pattern.cols}, {"entries", rows}};
}

StructurePattern pattern_from_json(const Json& j) {
  try {
    std::string grid;
    for (const auto& row : j.at("entries")) grid += row.get<std::string>() + "\n";
    StructurePattern p = StructurePattern::parse_grid(grid);
    if (p.rows != j.at("rows").get<int>() || p.cols != j.at("cols").get<int>())
      throw ParameterError("pattern JSON: declared shape does not match entries");
    return p;
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("pattern JSON: ") + e.what());
  }
}

std::string history_jsonl(const DesignState& state) {
  std::string out;
  for (size_t r = 0; r < state.history.size(); ++r) {
    const auto& round = state.history[r];
    std::vector<bool> flags(round.row_unique.begin(), round.row_unique.end());
    Json j{{"round", r + 1},
           {"inputs", one_based(round.inputs)},
           {"magnitudes", round.magnitudes},
           {"row_unique", flags},
           {"all_unique", std::all_of(flags.begin(), flags.end(), [](bool b) { return b; })}};
    out += j.dump() + "\n";
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << text;
}

}  // namespace netcs
