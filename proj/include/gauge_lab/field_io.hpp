#pragma once

#include "gauge_lab/grid.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace gauge_lab {

/// CSV layout:
///   # grid nx ny dx dy x0 y0 time [frame k]
///   i,j,x,y,value            (scalar)
///   i,j,x,y,vx,vy            (vector)
/// Numbers are written with 12 significant digits.
void write_csv(std::ostream& os, const ScalarField2& f, std::optional<int> frame = std::nullopt);
void write_csv(std::ostream& os, const VectorField2& v, std::optional<int> frame = std::nullopt);
void write_csv(const std::string& path, const ScalarField2& f, std::optional<int> frame = std::nullopt);
void write_csv(const std::string& path, const VectorField2& v, std::optional<int> frame = std::nullopt);

struct CsvHeader {
    Grid2 grid;
    double time{0.0};
    std::optional<int> frame;
};

[[nodiscard]] CsvHeader parse_csv_header(const std::string& line);
[[nodiscard]] ScalarField2 read_scalar_csv(std::istream& is);
[[nodiscard]] VectorField2 read_vector_csv(std::istream& is);

/// Downsampled `x,y,value` rows for heatmap tools (every `stride`-th node).
void write_heatmap_csv(std::ostream& os, const ScalarField2& f, int stride);

}  // namespace gauge_lab
