#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ecfb/cli/csv.hpp"
#include "ecfb/effective_capacity.hpp"

namespace ecfb::cli {

struct FigureOptions {
  unsigned jobs = 1;
  /// Overrides the EC method of fig2 (series or direct). Other figures are
  /// built on the direct-quadrature compensation solver.
  std::optional<EcMethod> method;
};

struct FigureDataset {
  std::string id;
  CsvTable table;
  std::vector<std::string> summary;
};

const std::vector<std::string>& figure_ids();

/// Builds the dataset of one figure. Throws ConfigError for an unknown id.
FigureDataset make_figure(const std::string& id, const FigureOptions& options = {});

/// Log-spaced error probabilities shared by the EC-vs-epsilon figures.
std::vector<double> figure_epsilon_grid();

/// Blocklengths of the fig5 curve family.
const std::vector<int>& fig5_blocklengths();

}  // namespace ecfb::cli
