#pragma once

// Problem, solution and trajectory artifacts.
//
//   problem:     <stem>.json (grid, bound, solver settings) + <stem>_u0.csv
//   solution:    <stem>.json (diagnostics, contact node lists) + <stem>.csv (w)
//   trajectory:  state_NNN.csv per state in long format
//                field,axis,i,j,x,y,value   (axis -1 for node fields)
//                plus trajectory.json with times, contact sets and diagnostics

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "divflow/flow.hpp"
#include "divflow/obstacle.hpp"
#include "divflow/tv1d.hpp"

namespace divflow::io {

void save_problem(const std::filesystem::path& stem, const ObstacleProblem& p);
ObstacleProblem load_problem(const std::filesystem::path& stem);
void save_solution(const std::filesystem::path& stem, const ObstacleSolution& s);

/// Long-format CSV of one state (w, v, div u on nodes; u on faces).
void write_state_csv(std::ostream& os, const FlowState& s);

/// Writes the state files and trajectory.json into dir; returns the file names.
std::vector<std::string> export_trajectory(const std::filesystem::path& dir, const Trajectory& traj);

/// Observer that streams "iteration,energy,residual" lines.
IterationObserver diagnostics_writer(std::ostream& os);

/// Two-column CSV (x, value) with uniformly spaced x at face midpoints.
Signal read_signal_csv(const std::filesystem::path& path);
void write_signal_csv(const std::filesystem::path& path, const Signal& s);

/// Shortest round-trip decimal representation.
std::string fmt(double x);

}  // namespace divflow::io
