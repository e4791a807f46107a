#pragma once

// Flat CSV layout for fields plus a JSON header describing the grid.
//
//   node CSV: i,value           (1D)      i,j,value        (2D)
//   face CSV: axis,i,value      (1D)      axis,i,j,value   (2D)
//   header:   {"dim":..,"lo":[..],"hi":[..],"n":[..],"disk_radius":..}

#include <filesystem>
#include <iosfwd>
#include <string>

#include "divflow/grid.hpp"

namespace divflow::io {

std::string grid_header_json(const Grid& grid);
GridPtr grid_from_header_json(const std::string& text);

void write_node_csv(std::ostream& os, const NodeField& w);
void write_face_csv(std::ostream& os, const FaceField& u);
NodeField read_node_csv(std::istream& is, const GridPtr& grid);
FaceField read_face_csv(std::istream& is, const GridPtr& grid);

/// Writes <stem>.json (grid header) and <stem>.csv.
void save(const std::filesystem::path& stem, const NodeField& w);
void save(const std::filesystem::path& stem, const FaceField& u);
NodeField load_node_field(const std::filesystem::path& stem);
FaceField load_face_field(const std::filesystem::path& stem);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace divflow::io
