#include "orthoreg/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace orthoreg {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_number(const std::string& cell, const std::string& col, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw DataError("line " + std::to_string(line_no) + ": non-numeric value '" + cell +
                    "' in column '" + col + "'");
  }
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // cell strings
  std::vector<std::size_t> line_numbers;
};

RawTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  RawTable tbl;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (tbl.header.empty()) {
      tbl.header = cells;
    } else {
      if (cells.size() != tbl.header.size())
        throw DataError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(tbl.header.size()) + " cells, found " +
                        std::to_string(cells.size()));
      tbl.rows.push_back(std::move(cells));
      tbl.line_numbers.push_back(line_no);
    }
  }
  if (tbl.header.empty()) throw DataError("'" + path + "' is empty");
  return tbl;
}

std::size_t column_of(const RawTable& tbl, const std::string& name, const std::string& path) {
  auto it = std::find(tbl.header.begin(), tbl.header.end(), name);
  if (it == tbl.header.end())
    throw DataError("'" + path + "' is missing column '" + name + "'");
  return static_cast<std::size_t>(it - tbl.header.begin());
}

}  // namespace

CsvSchema CsvSchema::standard(OutcomeKind kind, Index covariate_count) {
  CsvSchema s;
  s.outcome_kind = kind;
  for (Index j = 1; j <= covariate_count; ++j) s.covariate_cols.push_back("x" + std::to_string(j));
  return s;
}

CsvSchema CsvSchema::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("schema file '" + path + "': " + e.what());
  }
  CsvSchema s;
  if (j.contains("version") && j["version"].get<int>() != 1)
    throw DataError("schema file '" + path + "': unsupported version");
  if (j.contains("id")) s.id_col = j["id"].get<std::string>();
  if (j.contains("time")) s.time_col = j["time"].get<std::string>();
  if (j.contains("covariates"))
    s.covariate_cols = j["covariates"].get<std::vector<std::string>>();
  if (j.contains("treatment")) s.treatment_col = j["treatment"].get<std::string>();
  if (!j.contains("outcome")) throw DataError("schema file '" + path + "': missing 'outcome'");
  const auto& o = j["outcome"];
  s.outcome_kind = outcome_kind_from_string(o.at("kind").get<std::string>());
  if (s.outcome_kind == OutcomeKind::survival) {
    if (o.contains("time")) s.time_to_event_col = o["time"].get<std::string>();
    if (o.contains("event")) s.event_col = o["event"].get<std::string>();
  } else if (o.contains("value")) {
    s.outcome_col = o["value"].get<std::string>();
  }
  if (j.contains("outcome_file")) s.outcome_file = j["outcome_file"].get<std::string>();
  return s;
}

PanelDataset load_panel_csv(const std::string& path, const CsvSchema& schema) {
  RawTable tbl = read_table(path);
  const std::size_t id_ix = column_of(tbl, schema.id_col, path);
  const std::size_t t_ix = column_of(tbl, schema.time_col, path);
  const std::size_t a_ix = column_of(tbl, schema.treatment_col, path);
  std::vector<std::size_t> x_ix;
  for (const auto& c : schema.covariate_cols) x_ix.push_back(column_of(tbl, c, path));

  const bool outcome_inline = !schema.outcome_file.has_value();
  std::size_t y_ix = 0, yt_ix = 0, ye_ix = 0;
  if (outcome_inline) {
    if (schema.outcome_kind == OutcomeKind::survival) {
      yt_ix = column_of(tbl, schema.time_to_event_col, path);
      ye_ix = column_of(tbl, schema.event_col, path);
    } else {
      y_ix = column_of(tbl, schema.outcome_col, path);
    }
  }

  // Group rows by subject, keyed by time value.
  struct Row {
    std::size_t line;
    const std::vector<std::string>* cells;
  };
  std::vector<std::string> subject_order;
  std::map<std::string, std::map<double, Row>> by_subject;
  std::vector<double> time_values;
  for (std::size_t r = 0; r < tbl.rows.size(); ++r) {
    const auto& cells = tbl.rows[r];
    std::size_t line = tbl.line_numbers[r];
    const std::string& id = cells[id_ix];
    if (id.empty()) throw DataError("line " + std::to_string(line) + ": empty subject id");
    double tv = parse_number(cells[t_ix], schema.time_col, line);
    auto [it, fresh] = by_subject.try_emplace(id);
    if (fresh) subject_order.push_back(id);
    if (!it->second.emplace(tv, Row{line, &cells}).second)
      throw DataError("line " + std::to_string(line) + ": duplicate (subject,time) pair (" + id +
                      ", " + cells[t_ix] + ")");
    if (std::find(time_values.begin(), time_values.end(), tv) == time_values.end())
      time_values.push_back(tv);
  }
  if (by_subject.empty()) throw DataError("'" + path + "' has no data rows");
  std::sort(time_values.begin(), time_values.end());
  const Index T = static_cast<Index>(time_values.size());

  for (const auto& id : subject_order) {
    const auto& times = by_subject[id];
    if (static_cast<Index>(times.size()) != T) {
      for (double tv : time_values)
        if (!times.count(tv))
          throw DataError("ragged panel: subject '" + id + "' is missing time " +
                          format_full(tv));
    }
  }

  // A covariate column empty for every subject at a given time marks the
  // coordinate absent there; otherwise empties are missing data.
  std::vector<std::vector<bool>> coord_present(T, std::vector<bool>(x_ix.size(), false));
  for (Index ti = 0; ti < T; ++ti) {
    double tv = time_values[ti];
    for (std::size_t j = 0; j < x_ix.size(); ++j) {
      std::size_t n_empty = 0, n_full = 0;
      std::size_t sample_line = 0;
      for (const auto& id : subject_order) {
        const auto& row = by_subject[id].at(tv);
        if ((*row.cells)[x_ix[j]].empty()) {
          ++n_empty;
        } else {
          ++n_full;
          sample_line = row.line;
        }
      }
      if (n_empty > 0 && n_full > 0)
        throw DataError("column '" + schema.covariate_cols[j] + "' at time " + format_full(tv) +
                        " has missing cells (e.g. near line " + std::to_string(sample_line) +
                        "); missing data is not supported");
      coord_present[ti][j] = n_full > 0;
    }
  }

  // Outcome lookup when held in a separate file.
  std::map<std::string, Outcome> outcome_by_id;
  if (!outcome_inline) {
    RawTable otbl = read_table(*schema.outcome_file);
    std::size_t oid = column_of(otbl, schema.id_col, *schema.outcome_file);
    std::size_t ov = 0, ot = 0, oe = 0;
    if (schema.outcome_kind == OutcomeKind::survival) {
      ot = column_of(otbl, schema.time_to_event_col, *schema.outcome_file);
      oe = column_of(otbl, schema.event_col, *schema.outcome_file);
    } else {
      ov = column_of(otbl, schema.outcome_col, *schema.outcome_file);
    }
    for (std::size_t r = 0; r < otbl.rows.size(); ++r) {
      const auto& cells = otbl.rows[r];
      std::size_t line = otbl.line_numbers[r];
      Outcome out = schema.outcome_kind == OutcomeKind::survival
                        ? Outcome::survival(parse_number(cells[ot], schema.time_to_event_col, line),
                                            static_cast<int>(parse_number(cells[oe],
                                                                          schema.event_col, line)))
                        : (schema.outcome_kind == OutcomeKind::count
                               ? Outcome::count(parse_number(cells[ov], schema.outcome_col, line))
                           : schema.outcome_kind == OutcomeKind::binary
                               ? Outcome::binary(parse_number(cells[ov], schema.outcome_col, line))
                               : Outcome::continuous(
                                     parse_number(cells[ov], schema.outcome_col, line)));
      if (!outcome_by_id.emplace(cells[oid], out).second)
        throw DataError("outcome file line " + std::to_string(line) + ": duplicate subject id '" +
                        cells[oid] + "'");
    }
  }

  std::vector<SubjectRecord> subjects;
  subjects.reserve(subject_order.size());
  for (const auto& id : subject_order) {
    SubjectRecord s;
    s.id = id;
    s.covariates.resize(T);
    s.treatments.resize(T);
    bool outcome_set = false;
    for (Index ti = 0; ti < T; ++ti) {
      double tv = time_values[ti];
      const auto& row = by_subject[id].at(tv);
      const auto& cells = *row.cells;
      Index d = 0;
      for (std::size_t j = 0; j < x_ix.size(); ++j)
        if (coord_present[ti][j]) ++d;
      Vector x(d);
      Index k = 0;
      for (std::size_t j = 0; j < x_ix.size(); ++j) {
        if (!coord_present[ti][j]) {
          if (!cells[x_ix[j]].empty())
            throw DataError("line " + std::to_string(row.line) + ": unexpected value in column '" +
                            schema.covariate_cols[j] + "'");
          continue;
        }
        x[k++] = parse_number(cells[x_ix[j]], schema.covariate_cols[j], row.line);
      }
      s.covariates[ti] = x;
      if (cells[a_ix].empty())
        throw DataError("line " + std::to_string(row.line) + ": missing treatment value");
      s.treatments[ti] = parse_number(cells[a_ix], schema.treatment_col, row.line);

      Outcome out = Outcome::continuous(0.0);
      if (outcome_inline) {
        if (schema.outcome_kind == OutcomeKind::survival) {
          out = Outcome::survival(
              parse_number(cells[yt_ix], schema.time_to_event_col, row.line),
              static_cast<int>(parse_number(cells[ye_ix], schema.event_col, row.line)));
        } else {
          double v = parse_number(cells[y_ix], schema.outcome_col, row.line);
          out = schema.outcome_kind == OutcomeKind::count
                    ? Outcome::count(v)
                : schema.outcome_kind == OutcomeKind::binary ? Outcome::binary(v)
                                                             : Outcome::continuous(v);
        }
        if (!outcome_set) {
          s.outcome = out;
          outcome_set = true;
        } else {
          bool same = s.outcome.kind() == out.kind() &&
                      (s.outcome.kind() == OutcomeKind::survival
                           ? (s.outcome.time() == out.time() && s.outcome.event() == out.event())
                           : s.outcome.value() == out.value());
          if (!same)
            throw DataError("line " + std::to_string(row.line) + ": outcome differs across rows of subject '" +
                            id + "'");
        }
      }
    }
    if (!outcome_inline) {
      auto it = outcome_by_id.find(id);
      if (it == outcome_by_id.end())
        throw DataError("subject '" + id + "' has no row in the outcome file");
      s.outcome = it->second;
    }
    subjects.push_back(std::move(s));
  }
  return PanelDataset::build(std::move(subjects));
}

void write_panel_csv(const PanelDataset& panel, const std::string& path,
                     const CsvSchema& schema) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  const Index T = panel.T();
  Index maxd = 0;
  for (Index t = 0; t < T; ++t) maxd = std::max(maxd, panel.covariate_dims()[t]);
  if (static_cast<Index>(schema.covariate_cols.size()) < maxd)
    throw DataError("schema has too few covariate columns for this panel");

  out << schema.id_col << "," << schema.time_col;
  for (Index j = 0; j < maxd; ++j) out << "," << schema.covariate_cols[j];
  out << "," << schema.treatment_col;
  if (panel.outcome_kind() == OutcomeKind::survival)
    out << "," << schema.time_to_event_col << "," << schema.event_col;
  else
    out << "," << schema.outcome_col;
  out << "\n";

  for (Index i = 0; i < panel.n(); ++i) {
    for (Index t = 1; t <= T; ++t) {
      out << panel.ids()[i] << "," << t;
      Index d = panel.covariate_dims()[t - 1];
      for (Index j = 0; j < maxd; ++j) {
        out << ",";
        if (j < d) out << format_full(panel.covariates(t)(i, j));
      }
      out << "," << format_full(panel.treatment(i, t));
      if (panel.outcome_kind() == OutcomeKind::survival)
        out << "," << format_full(panel.survival_times()[i]) << ","
            << panel.survival_events()[i];
      else
        out << "," << format_full(panel.outcome_values()[i]);
      out << "\n";
    }
  }
}

void write_panel_csv(const PanelDataset& panel, const std::string& path) {
  Index maxd = 0;
  for (Index t = 0; t < panel.T(); ++t) maxd = std::max(maxd, panel.covariate_dims()[t]);
  write_panel_csv(panel, path, CsvSchema::standard(panel.outcome_kind(), maxd));
}

}  // namespace orthoreg
