#pragma once

#include <ostream>
#include <span>
#include <string>

#include "digits/evolution.hpp"
#include "digits/grouping.hpp"
#include "digits/pipeline.hpp"

namespace digits {

// CSV output: comma separated, header row, '.' decimal point, LF endings.

/// Fixed six-decimal rendering used by every CSV writer.
std::string format_decimal(double value);

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm);

/// Parses the layout written by write_confusion_csv.
ConfusionMatrix read_confusion_csv(std::istream& in);

/// Rows of kind "group" (id, members) then "pair" (a, b, mutual count).
void write_groups_csv(std::ostream& out, const GroupTable& table, std::span<const ConfusedPair> pairs);

/// generation, member, bitstring, fitness, best_so_far
void write_ga_history_csv(std::ostream& out, const GaHistory& history);

void write_report_csv(std::ostream& out, const Report& report);

/// Human-readable summary laid out like a results table: one column per
/// stage, a recognition-rate row and a classifier-shape row.
void write_report_table(std::ostream& out, const Report& report, std::size_t coarse_hidden);

}  // namespace digits
