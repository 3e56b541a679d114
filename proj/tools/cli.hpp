#pragma once

#include "warpcmc/hypersurface.hpp"
#include "warpcmc/models.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace warpcmc::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { exit_ok = 0, exit_internal = 1, exit_hypothesis = 2, exit_audit = 3 };

struct SurfaceConfig {
    double radius = 0.0;        ///< slice radius r; 0 selects the default
    double area_radius = 0.0;   ///< slice at h(r) = area_radius (overrides radius)
    std::vector<HarmonicMode> modes;
    RadialCoordinate coordinate = RadialCoordinate::arclength;
};

struct RunConfig {
    ModelSpec model;
    std::string variant;          ///< "", "boundary" or "ball": condition set for check
    bool axisymmetric = false;    ///< forced for n > 3
    int nlat = 64;                ///< full grid latitudes (longitudes = 2 nlat)
    int axis_nodes = 256;
    int condition_grid = 128;
    SurfaceConfig surface;

    double dt = 0.0;              ///< 0 selects 1e-3 r_bar
    double t_end = 1.0;
    double epsilon_cut = 1e-4;
    int stride = 1;

    double cmc_tol = 1e-7;
    int max_iter = 2000;
    int corpus = 20;
    double amplitude = 0.05;      ///< corpus amplitude cap
    int max_degree = 4;
    std::uint64_t seed = 1;

    std::string output_dir = ".";
    std::string format = "table"; ///< "table" or "json-lines"
};

/// JSON document with sections model, grid, surface, flow, cmc, output.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string describe(const ModelSpec& spec);

int cmd_check(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);
int cmd_flow(const RunConfig& config, std::ostream& log);
int cmd_cmc(const RunConfig& config, std::ostream& log);
int cmd_models(std::ostream& log);

/// Parses arguments and dispatches; maps library errors to exit codes.
int run_main(int argc, char** argv);

} // namespace warpcmc::cli
