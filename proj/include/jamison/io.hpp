#pragma once

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ios>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "construction.hpp"
#include "error.hpp"
#include "index_sequence.hpp"

namespace jamison {

using json = nlohmann::ordered_json;

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io_error, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw error(errc::config_invalid, path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw error(errc::io_error, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw error(errc::io_error, "write failed for " + path.string());
}

/// Shortest text that round-trips the double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

class csv_table {
 public:
  explicit csv_table(std::vector<std::string> header) : header_(std::move(header)) {}

  csv_table& row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw error(errc::size_mismatch, "csv row width differs from header");
    rows_.push_back(std::move(cells));
    return *this;
  }

  std::string str() const {
    std::ostringstream os;
    auto line = [&os](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? "," : "") << cells[c];
      os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return os.str();
  }

  void write(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw error(errc::io_error, "cannot write " + path.string());
    out << str();
  }

  std::size_t size() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// Sequences
// ---------------------------------------------------------------------------

/// {"kind": "integer"|"real", "terms": [...]} or {"generator": "factorials"|"integers"|"powers_of_two", "count": n}.
inline index_sequence sequence_from_json(const json& j) {
  try {
    if (j.contains("generator")) {
      const auto g = j.at("generator").get<std::string>();
      const auto n = j.at("count").get<std::int64_t>();
      if (n < 1) throw error(errc::config_invalid, "generator count must be >= 1");
      if (g == "factorials") return index_sequence::factorials(static_cast<int>(n));
      if (g == "integers") return index_sequence::integers(n);
      if (g == "powers_of_two") return index_sequence::powers_of_two(static_cast<int>(n - 1));
      throw error(errc::config_invalid, "unknown generator " + g);
    }
    const auto kind_name = j.value("kind", std::string("integer"));
    if (kind_name != "integer" && kind_name != "real") throw error(errc::config_invalid, "kind must be integer or real");
    return index_sequence(j.at("terms").get<std::vector<double>>(),
                          kind_name == "real" ? sequence_kind::real : sequence_kind::integer);
  } catch (const json::exception& e) {
    throw error(errc::config_invalid, std::string("sequence: ") + e.what());
  }
}

inline json sequence_to_json(const index_sequence& s) {
  return json{{"kind", to_string(s.kind())}, {"terms", s.terms()}};
}

inline index_sequence load_sequence(const std::filesystem::path& path) { return sequence_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

inline std::string precise_to_string(const precise_real& x) {
  return x.str(std::numeric_limits<precise_real>::max_digits10, std::ios_base::scientific);
}

inline json budget_to_json(const level_budget& b) {
  return json{{"level", b.level},
              {"certified", b.certified()},
              {"gap", b.gap},
              {"gap_bound", b.gap_bound},
              {"gap_ratio_ok", b.gap_ratio_ok},
              {"a_norm", b.a_norm},
              {"b_norm", b.b_norm},
              {"eigvec_budget", b.eigvec_budget},
              {"eigvec_budget_ok", b.eigvec_budget_ok},
              {"tail_sum_max", b.tail_sum_max},
              {"tail_budget", b.tail_budget},
              {"tail_sum_ok", b.tail_sum_ok},
              {"search_eta", b.search_eta},
              {"near_return_value", b.near_return_value},
              {"attempts", b.attempts}};
}

inline json construction_to_json(const shift_construction& c, int fibers = 2) {
  json thetas = json::array();
  for (const auto& t : c.thetas) thetas.push_back(precise_to_string(t));
  json budgets = json::array();
  for (const auto& b : c.budgets) budgets.push_back(budget_to_json(b));
  return json{{"format", "jamison-construction"},
              {"version", 1},
              {"sequence", sequence_to_json(c.seq)},
              {"horizon", c.horizon},
              {"levels", c.levels()},
              {"fibers", fibers},
              {"weights", json{{"w", c.schedule.w}, {"model_C", c.schedule.model_C}, {"model_M", c.schedule.model_M}}},
              {"thetas", thetas},
              {"anchors", c.anchors},
              {"gaps", c.gaps},
              {"certified", c.certified()},
              {"budgets", budgets}};
}

/// Angles are read exactly; gaps, anchors and budgets are re-derived from them.
inline shift_construction construction_from_json(const json& j) {
  try {
    if (j.value("format", std::string()) != "jamison-construction")
      throw error(errc::config_invalid, "not a construction file");
    shift_construction c;
    c.seq = sequence_from_json(j.at("sequence"));
    c.horizon = j.at("horizon").get<std::size_t>();
    check_horizon(c.seq, c.horizon);
    const auto& w = j.at("weights");
    c.schedule.w = w.at("w").get<std::vector<double>>();
    c.schedule.model_C = w.value("model_C", 1.0);
    c.schedule.model_M = w.value("model_M", std::vector<double>{});
    for (const auto& t : j.at("thetas")) c.thetas.emplace_back(t.get<std::string>());
    if (c.thetas.empty()) throw error(errc::config_invalid, "construction has no levels");
    c.schedule.validate(c.levels());
    if (j.contains("budgets"))
      for (const auto& b : j.at("budgets")) {
        level_budget lb;
        lb.search_eta = b.value("search_eta", 0.0);
        lb.near_return_value = b.value("near_return_value", 0.0);
        lb.attempts = b.value("attempts", 0);
        c.budgets.push_back(lb);
      }
    certify(c);
    return c;
  } catch (const json::exception& e) {
    throw error(errc::config_invalid, std::string("construction: ") + e.what());
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const error*>(&e)) throw;
    throw error(errc::config_invalid, std::string("construction: ") + e.what());
  }
}

inline shift_construction load_construction(const std::filesystem::path& path) {
  return construction_from_json(read_json_file(path));
}

inline void save_construction(const std::filesystem::path& path, const shift_construction& c, int fibers = 2) {
  write_json_file(path, construction_to_json(c, fibers));
}

}  // namespace jamison
