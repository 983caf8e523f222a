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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "holobeam/ao_driver.hpp"
#include "holobeam/scenario.hpp"

namespace holobeam {

/// A parsed or generated result table.  On disk:
///
///   # holobeam-csv v1
///   # family: <name>
///   col_a,col_b,...
///   rows...
struct CsvTable {
    std::string family;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> row_lines;  // source line of each row (read_csv only)
    int header_line = 0;

    int column(const std::string& name) const;  // -1 when absent
};

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Throws std::runtime_error naming the offending line on malformed input.
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Shortest round-trippable decimal form; "nan" / "inf" for non-finite values.
std::string format_number(double v);

enum class SweepAxis { none, theta, snr_db, n_users, spacing };

struct Campaign {
    ScenarioConfig base;
    SweepAxis axis = SweepAxis::none;
    std::vector<Method> methods;
    std::vector<double> axis_values;  // theta [deg], delta [dB], K, or d_x / lambda
    int realizations = 50;
    std::uint64_t master_seed = 1;
    std::filesystem::path out_dir;  // empty: nothing written
    OptimizerOptions optimizer;
    double rho_over_df = 0.5;  // angle sweep user distance
    int threads = 0;           // 0: HOLOBEAM_THREADS, then the hardware count
    bool trace = false;        // also emit per-run convergence tables
    bool dump_solutions = false;  // JSON lines with the returned q and w
};

struct CampaignResult {
    CsvTable table;
    std::vector<CsvTable> extra;  // trace tables when requested
    std::filesystem::path csv_path;
    int runs = 0;
    int feasible_runs = 0;
};

/// Desk-scale defaults for each family, overridable field by field.
Campaign default_campaign(SweepAxis axis);

/// 16x16 array, 1000 realisations, 1 degree angle grid.
void apply_full_scale(Campaign& c);

/// Worker count used for a campaign (explicit, HOLOBEAM_THREADS, hardware).
int resolve_threads(int requested);

CampaignResult run_angle_sweep(const Campaign& c);
CampaignResult run_snr_sweep(const Campaign& c);
CampaignResult run_monte_carlo(const Campaign& c);
CampaignResult run_user_count_sweep(const Campaign& c);
CampaignResult run_spacing_sweep(const Campaign& c);

/// Single scenario, every method in `c.methods`; writes solve.csv and
/// solve.json (weights and precoders) when an output directory is given.
CampaignResult run_solve(const Campaign& c);

/// Element count per microstrip that keeps N_e * d_x fixed.
int elements_for_spacing(int base_n_c, double base_dx_over_lambda, double dx_over_lambda);

}  // namespace holobeam
