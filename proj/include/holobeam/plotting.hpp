// SPDX-License-Identifier: Apache-2.0
//
// holobeam: Lorentzian-constrained holographic beamforming for DMA-aided MISO downlink
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "holobeam/experiments.hpp"

namespace holobeam {

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    bool markers_only = false;
    std::vector<PlotSeries> series;
};

/// Self-contained SVG line chart. Non-finite (or, on a log axis,
/// non-positive) points are skipped; with nothing left the axes carry a
/// "no data" note.
std::string render_svg(const Chart& chart);

/// Charts for one result table, keyed by output file stem.
std::vector<std::pair<std::string, Chart>> charts_for(const CsvTable& table);

/// Reads a holobeam CSV and writes its charts next to `out_dir` (defaults to
/// the CSV's directory). Returns the written paths.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& csv_path,
                                              const std::filesystem::path& out_dir = {});

}  // namespace holobeam
