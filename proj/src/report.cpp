#include "pomdebt/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

#include "pomdebt/error.hpp"

namespace pomdebt {

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else out.push_back(c);
  }
  return out;
}

std::string with_percent(std::size_t count, int percent) {
  return fmt::format("{} ({}%)", count, percent);
}

std::string grouped(std::size_t n) {
  auto digits = std::to_string(n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

// Plain-text table with left-aligned first column and right-aligned others.
std::string render_text(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto measure = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  };
  measure(header);
  for (const auto& r : rows) measure(r);
  auto line = [&](const std::vector<std::string>& r) {
    std::string out;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i > 0) out += "  ";
      out += i == 0 ? fmt::format("{:<{}}", r[i], width[i]) : fmt::format("{:>{}}", r[i], width[i]);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  auto line = [](const std::vector<std::string>& r) {
    std::string out;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i > 0) out.push_back(',');
      out += csv_field(r[i]);
    }
    return out + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

std::string render_markdown(const std::vector<std::string>& header,
                            const std::vector<std::vector<std::string>>& rows) {
  auto line = [](const std::vector<std::string>& r) {
    std::string out = "|";
    for (const auto& cell : r) out += " " + md_cell(cell) + " |";
    return out + "\n";
  };
  std::string out = line(header);
  out += "|";
  for (std::size_t i = 0; i < header.size(); ++i) out += i == 0 ? " --- |" : " ---: |";
  out += "\n";
  for (const auto& r : rows) out += line(r);
  return out;
}

std::string render(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows, Format format) {
  switch (format) {
    case Format::Csv: return render_csv(header, rows);
    case Format::Markdown: return render_markdown(header, rows);
    case Format::Text:
    case Format::Json: break;
  }
  return render_text(header, rows);
}

std::string fixed2(double v) { return fmt::format("{:.2f}", v); }

}  // namespace

std::optional<Format> parse_format(std::string_view name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  if (name == "md" || name == "markdown") return Format::Markdown;
  if (name == "text" || name == "txt") return Format::Text;
  return std::nullopt;
}

int percent_half_up(std::size_t count, std::size_t total) {
  if (total == 0) return 0;
  return static_cast<int>((200 * count + total) / (2 * total));
}

std::size_t CoMatrix::total() const {
  std::size_t sum = 0;
  for (std::size_t r = 0; r < counts.size(); ++r) sum += row_total(r);
  return sum;
}

std::size_t CoMatrix::row_total(std::size_t row) const {
  return std::accumulate(counts[row].begin(), counts[row].end(), std::size_t{0});
}

CoMatrix co_occurrence(const std::vector<SatdRecord>& records, CoDims dims) {
  CoMatrix m;
  m.row_dim = "location";
  for (auto loc : kAllLocations) m.rows.emplace_back(display_name(loc));
  if (dims == CoDims::LocationReason) {
    m.col_dim = "reason";
    for (std::size_t i = 0; i < kReasonCategoryCount; ++i) {
      m.cols.emplace_back(display_name(static_cast<ReasonCategory>(i)));
    }
  } else {
    m.col_dim = "purpose";
    for (std::size_t i = 0; i < kPurposeCount; ++i) {
      m.cols.emplace_back(display_name(static_cast<PurposeLabel>(i)));
    }
  }
  m.counts.assign(m.rows.size(), std::vector<std::size_t>(m.cols.size(), 0));
  for (const auto& r : records) {
    std::size_t col = 0;
    if (dims == CoDims::LocationReason) {
      if (!r.reason) throw Error(ErrorCode::MissingLabel, "record " + r.id + " has no reason label");
      col = static_cast<std::size_t>(r.reason->category);
    } else {
      if (!r.purpose) throw Error(ErrorCode::MissingLabel, "record " + r.id + " has no purpose label");
      col = static_cast<std::size_t>(*r.purpose);
    }
    ++m.counts[static_cast<std::size_t>(r.location)][col];
  }
  return m;
}

std::string co_matrix_csv(const CoMatrix& m) {
  std::vector<std::string> header{m.row_dim + "\\" + m.col_dim};
  header.insert(header.end(), m.cols.begin(), m.cols.end());
  header.emplace_back("total");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    std::vector<std::string> row{m.rows[r]};
    for (auto c : m.counts[r]) row.push_back(std::to_string(c));
    row.push_back(std::to_string(m.row_total(r)));
    rows.push_back(std::move(row));
  }
  return render_csv(header, rows);
}

std::string co_matrix_conditional_csv(const CoMatrix& m) {
  std::vector<std::string> header{m.row_dim + "\\" + m.col_dim};
  header.insert(header.end(), m.cols.begin(), m.cols.end());
  header.emplace_back("n");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    const auto total = m.row_total(r);
    std::vector<std::string> row{m.rows[r]};
    for (auto c : m.counts[r]) row.push_back(std::to_string(percent_half_up(c, total)));
    row.push_back(std::to_string(total));
    rows.push_back(std::move(row));
  }
  return render_csv(header, rows);
}

std::vector<FrequencyRow> location_frequencies(
    const std::vector<SatdRecord>& records,
    const std::optional<std::map<LocationCategory, std::size_t>>& loc) {
  std::map<LocationCategory, std::size_t> counts;
  for (const auto& r : records) ++counts[r.location];
  std::size_t loc_total = 0;
  if (loc) {
    for (const auto& [category, lines] : *loc) loc_total += lines;
  }
  std::vector<FrequencyRow> rows;
  for (auto category : kAllLocations) {
    const auto count = counts[category];
    if (category == LocationCategory::Unclassified && count == 0) continue;
    FrequencyRow row;
    row.label = std::string(display_name(category));
    row.count = count;
    row.percent = percent_half_up(count, records.size());
    if (loc && category != LocationCategory::Unclassified) {
      const auto it = loc->find(category);
      row.loc = it == loc->end() ? 0 : it->second;
      row.loc_percent = percent_half_up(*row.loc, loc_total);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<FrequencyRow> reason_frequencies(const std::vector<SatdRecord>& records) {
  std::vector<std::size_t> category(kReasonCategoryCount, 0);
  std::map<ReasonSubcategory, std::size_t> sub;
  std::size_t total = 0;
  for (const auto& r : records) {
    if (!r.reason) continue;
    ++total;
    ++category[static_cast<std::size_t>(r.reason->category)];
    if (r.reason->subcategory) ++sub[*r.reason->subcategory];
  }
  std::vector<FrequencyRow> rows;
  for (std::size_t c = 0; c < kReasonCategoryCount; ++c) {
    const auto cat = static_cast<ReasonCategory>(c);
    rows.push_back({std::string(display_name(cat)), 0, category[c],
                    percent_half_up(category[c], total), std::nullopt, std::nullopt});
    for (const auto& [s, count] : sub) {
      if (parent_category(s) != cat) continue;
      rows.push_back({std::string(display_name(s)), 1, count, percent_half_up(count, total),
                      std::nullopt, std::nullopt});
    }
  }
  return rows;
}

std::vector<FrequencyRow> purpose_frequencies(const std::vector<SatdRecord>& records) {
  std::vector<std::size_t> counts(kPurposeCount, 0);
  std::size_t total = 0;
  for (const auto& r : records) {
    if (!r.purpose) continue;
    ++total;
    ++counts[static_cast<std::size_t>(*r.purpose)];
  }
  std::vector<FrequencyRow> rows;
  for (std::size_t p = 0; p < kPurposeCount; ++p) {
    rows.push_back({std::string(display_name(static_cast<PurposeLabel>(p))), 0, counts[p],
                    percent_half_up(counts[p], total), std::nullopt, std::nullopt});
  }
  return rows;
}

std::string format_frequency_table(std::string_view title, const std::vector<FrequencyRow>& rows,
                                   Format format) {
  const bool with_loc = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.loc.has_value(); });
  std::vector<std::string> header{std::string(title), "Frequency"};
  if (with_loc) header.emplace_back("LOC");
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    std::vector<std::string> row;
    row.push_back(r.depth > 0 ? "  " + r.label : r.label);
    if (format == Format::Csv) {
      row[0] = r.label;
      row.push_back(std::to_string(r.count));
      row.push_back(std::to_string(r.percent));
      if (with_loc) {
        row.push_back(r.loc ? std::to_string(*r.loc) : "");
        row.push_back(r.loc_percent ? std::to_string(*r.loc_percent) : "");
      }
    } else {
      row.push_back(with_percent(r.count, r.percent));
      if (with_loc) {
        row.push_back(r.loc ? fmt::format("{} ({}%)", grouped(*r.loc), *r.loc_percent) : "");
      }
    }
    cells.push_back(std::move(row));
  }
  if (format == Format::Csv) {
    header = {std::string(title), "count", "percent"};
    if (with_loc) {
      header.emplace_back("loc");
      header.emplace_back("loc_percent");
    }
    std::vector<std::string> full_header = header;
    if (std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.depth > 0; })) {
      full_header.insert(full_header.begin() + 1, "level");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        cells[i].insert(cells[i].begin() + 1, rows[i].depth > 0 ? "subcategory" : "category");
      }
    }
    return render_csv(full_header, cells);
  }
  return render(header, cells, format);
}

std::vector<FeatureRow> top_features(const NgramVocabulary& vocab, std::size_t per_class,
                                     const std::vector<std::string>& class_order) {
  std::vector<std::string> classes = class_order;
  if (classes.empty()) {
    std::map<std::string, bool> seen;
    for (const auto& t : vocab.terms) {
      for (const auto& [label, count] : t.class_freq) seen[label] = true;
    }
    for (const auto& [label, unused] : seen) classes.push_back(label);
  }
  std::vector<FeatureRow> out;
  if (per_class == 0) return out;
  for (const auto& label : classes) {
    std::vector<std::pair<std::size_t, std::size_t>> ranked;  // (freq, term index)
    for (std::size_t i = 0; i < vocab.terms.size(); ++i) {
      const auto it = vocab.terms[i].class_freq.find(label);
      if (it != vocab.terms[i].class_freq.end() && it->second > 0) ranked.emplace_back(it->second, i);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; k < std::min(per_class, ranked.size()); ++k) {
      out.push_back({label, vocab.terms[ranked[k].second].text(), ranked[k].first});
    }
  }
  return out;
}

std::string format_top_features(const std::vector<FeatureRow>& rows, Format format) {
  std::vector<std::vector<std::string>> cells;
  std::string previous;
  for (const auto& r : rows) {
    const bool first = r.label != previous || format == Format::Csv;
    cells.push_back({first ? r.label : "", r.ngram, std::to_string(r.frequency)});
    previous = r.label;
  }
  return render({"Category", "N-gram features", "Frequency"}, cells, format);
}

std::string format_eval_table(const std::vector<std::pair<std::string, EvalReport>>& columns,
                              Format format) {
  if (columns.empty()) return {};
  const auto& labels = columns.front().second.label_names;
  for (const auto& [name, report] : columns) {
    if (report.label_names != labels) {
      throw Error(ErrorCode::Precondition, "evaluation reports use different label sets");
    }
  }
  std::vector<std::string> header{"Measure", "Category"};
  for (const auto& [name, report] : columns) header.push_back(name);

  std::vector<std::vector<std::string>> rows;
  auto add_measure = [&](std::string_view measure, double ClassScores::*field) {
    for (std::size_t c = 0; c < labels.size(); ++c) {
      std::vector<std::string> row{c == 0 ? std::string(measure) : "", labels[c]};
      for (const auto& [name, report] : columns) row.push_back(fixed2(report.per_class[c].*field));
      rows.push_back(std::move(row));
    }
    std::vector<std::string> weighted{"", "Avg. (weighted)"};
    std::vector<std::string> macro{"", "Avg. (macro)"};
    for (const auto& [name, report] : columns) {
      weighted.push_back(fixed2(report.weighted.*field));
      macro.push_back(fixed2(report.macro.*field));
    }
    rows.push_back(std::move(weighted));
    rows.push_back(std::move(macro));
  };
  add_measure("Precision", &ClassScores::precision);
  add_measure("Recall", &ClassScores::recall);
  add_measure("F1-score", &ClassScores::f1);
  if (format == Format::Csv) {
    std::string measure;
    for (auto& row : rows) {
      if (!row[0].empty()) measure = row[0];
      row[0] = measure;
    }
  }
  return render(header, rows, format);
}

}  // namespace pomdebt
