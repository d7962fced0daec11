#include "digits/report.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <vector>

#include "digits/error.hpp"

namespace digits {

namespace {

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
  return buf;
}

std::string topology_string(const Topology& t) {
  return std::to_string(t.inputs) + "-" + std::to_string(t.hidden) + "-" + std::to_string(t.outputs);
}

}  // namespace

std::string format_decimal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm) {
  out << "true";
  for (Label p = 0; p < kNumClasses; ++p) out << ",pred_" << p;
  out << '\n';
  for (Label t = 0; t < kNumClasses; ++t) {
    out << t;
    for (Label p = 0; p < kNumClasses; ++p) out << ',' << cm.at(t, p);
    out << '\n';
  }
}

ConfusionMatrix read_confusion_csv(std::istream& in) {
  std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> counts{};
  std::string line;
  std::vector<std::vector<std::int64_t>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.empty() || cells[0] == "true") continue;
    // Accept either "label,c0..c9" or a bare 10-value row.
    if (cells.size() == kNumClasses + 1) cells.erase(cells.begin());
    if (cells.size() != kNumClasses) {
      throw Error(ErrorCode::InvalidArgument, "confusion row needs 10 counts: '" + line + "'");
    }
    std::vector<std::int64_t> row;
    for (const auto& c : cells) {
      try {
        row.push_back(std::stoll(c));
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "bad confusion count '" + c + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() != kNumClasses) throw Error(ErrorCode::InvalidArgument, "confusion matrix needs 10 rows");
  for (std::size_t i = 0; i < kNumClasses; ++i)
    for (std::size_t j = 0; j < kNumClasses; ++j) counts[i][j] = rows[i][j];
  return ConfusionMatrix(counts);
}

void write_groups_csv(std::ostream& out, const GroupTable& table, std::span<const ConfusedPair> pairs) {
  out << "kind,id,members,a,b,mutual\n";
  for (std::size_t g = 0; g < table.size(); ++g) {
    const auto members = table.groups()[g].members();
    std::string joined;
    for (Label l : members) joined += (joined.empty() ? "" : " ") + std::to_string(l);
    out << "group," << g << ',' << joined << ",,,\n";
  }
  for (const auto& p : pairs) out << "pair,,," << p.a << ',' << p.b << ',' << p.count << '\n';
}

void write_ga_history_csv(std::ostream& out, const GaHistory& history) {
  out << "generation,member,bitstring,fitness,best_so_far\n";
  for (const auto& rec : history) {
    for (std::size_t m = 0; m < rec.members.size(); ++m) {
      out << rec.generation << ',' << m << ',' << rec.members[m].to_string() << ','
          << format_decimal(rec.fitness[m]) << ',' << format_decimal(rec.best_fitness) << '\n';
    }
  }
}

void write_report_csv(std::ostream& out, const Report& r) {
  out << "stage,group,classifier,samples,correct,accuracy,coarse_accuracy_same_samples\n";
  out << "coarse,,," << r.samples << ',' << r.coarse_correct << ',' << format_decimal(r.coarse_accuracy()) << ",\n";
  for (const auto& g : r.groups) {
    const std::string members = "{" + g.group.to_string() + "}";
    out << "group_routed,\"" << members << "\"," << topology_string(g.topology) << ',' << g.routed << ','
        << g.routed_correct << ',' << format_decimal(g.routed_accuracy()) << ','
        << format_decimal(g.routed_coarse_accuracy()) << '\n';
    out << "group_members,\"" << members << "\"," << topology_string(g.topology) << ',' << g.members << ','
        << g.members_correct << ',' << format_decimal(g.member_accuracy()) << ",\n";
  }
  out << "coarse_final,,," << r.final_routed << ',' << r.final_correct << ','
      << format_decimal(r.final_routed ? static_cast<double>(r.final_correct) / static_cast<double>(r.final_routed) : 0.0)
      << ",\n";
  out << "combined,,," << r.samples << ',' << r.combined_correct << ',' << format_decimal(r.combined_accuracy())
      << ",\n";
  out << "improvement,,,,," << format_decimal(r.improvement()) << ",\n";
  out << "rejection,,,,," << format_decimal(r.rejection_rate()) << ",\n";
}

void write_report_table(std::ostream& out, const Report& r, std::size_t coarse_hidden) {
  std::vector<std::string> heads{"", "Coarse (pass-1)"};
  std::vector<std::string> rate{"Recognition performance", percent(r.coarse_accuracy())};
  std::vector<std::string> shape{"MLP classifier", "24-" + std::to_string(coarse_hidden) + "-10"};
  for (std::size_t g = 0; g < r.groups.size(); ++g) {
    heads.push_back("Group" + std::to_string(g + 1) + " {" + r.groups[g].group.to_string() + "}");
    rate.push_back(percent(r.groups[g].routed_accuracy()));
    shape.push_back(topology_string(r.groups[g].topology));
  }
  heads.push_back("Coarse + Fine (pass-2)");
  rate.push_back(percent(r.combined_accuracy()));
  shape.push_back("-----");
  heads.push_back("Increase");
  rate.push_back(percent(r.improvement()));
  shape.push_back("-----");

  std::vector<std::size_t> width(heads.size());
  for (std::size_t c = 0; c < heads.size(); ++c)
    width[c] = std::max({heads[c].size(), rate[c].size(), shape[c].size()});
  auto row = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << (c ? " | " : "") << std::left << std::setw(static_cast<int>(width[c])) << cells[c];
    }
    out << '\n';
  };
  row(heads);
  std::size_t total = 0;
  for (auto w : width) total += w + 3;
  out << std::string(total - 3, '-') << '\n';
  row(rate);
  row(shape);
  out << "Samples: " << r.samples << ", rejection rate: " << percent(r.rejection_rate()) << '\n';
}

}  // namespace digits
