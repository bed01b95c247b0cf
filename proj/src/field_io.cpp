#include "gauge_lab/field_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace gauge_lab {

namespace {

void write_header(std::ostream& os, const Grid2& g, double time, std::optional<int> frame) {
    os << "# grid " << g.nx << ' ' << g.ny << ' ' << g.dx << ' ' << g.dy << ' ' << g.x0 << ' ' << g.y0 << ' '
       << time;
    if (frame) os << " frame " << *frame;
    os << '\n';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    return os;
}

std::vector<double> split_numbers(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

template <class Field, class Fill>
Field read_field(std::istream& is, std::size_t columns, Fill&& fill) {
    std::string line;
    if (!std::getline(is, line)) throw Error("field CSV: missing header");
    const auto header = parse_csv_header(line);
    Field out(header.grid, header.time);
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto v = split_numbers(line);
        if (v.size() != columns) throw Error("field CSV: bad row '" + line + "'");
        const int i = static_cast<int>(v[0]);
        const int j = static_cast<int>(v[1]);
        if (i < 0 || j < 0 || i >= header.grid.nx || j >= header.grid.ny) throw Error("field CSV: index out of range");
        fill(out, i, j, v);
        ++rows;
    }
    if (rows != header.grid.size()) throw Error("field CSV: row count does not match the grid");
    return out;
}

}  // namespace

void write_csv(std::ostream& os, const ScalarField2& f, std::optional<int> frame) {
    const auto old = os.precision(12);
    const Grid2& g = f.grid;
    write_header(os, g, f.time, frame);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            os << i << ',' << j << ',' << g.x(i) << ',' << g.y(j) << ',' << f(i, j) << '\n';
    os.precision(old);
}

void write_csv(std::ostream& os, const VectorField2& v, std::optional<int> frame) {
    const auto old = os.precision(12);
    const Grid2& g = v.grid;
    write_header(os, g, v.time, frame);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const auto p = v.at(i, j);
            os << i << ',' << j << ',' << g.x(i) << ',' << g.y(j) << ',' << p.x << ',' << p.y << '\n';
        }
    }
    os.precision(old);
}

void write_csv(const std::string& path, const ScalarField2& f, std::optional<int> frame) {
    auto os = open_out(path);
    write_csv(os, f, frame);
}

void write_csv(const std::string& path, const VectorField2& v, std::optional<int> frame) {
    auto os = open_out(path);
    write_csv(os, v, frame);
}

CsvHeader parse_csv_header(const std::string& line) {
    std::istringstream ss(line);
    std::string hash, tag;
    CsvHeader h;
    ss >> hash >> tag >> h.grid.nx >> h.grid.ny >> h.grid.dx >> h.grid.dy >> h.grid.x0 >> h.grid.y0 >> h.time;
    if (!ss || hash != "#" || tag != "grid") throw Error("field CSV: malformed header '" + line + "'");
    std::string word;
    if (ss >> word) {
        int k = 0;
        if (word != "frame" || !(ss >> k)) throw Error("field CSV: malformed header '" + line + "'");
        h.frame = k;
    }
    return h;
}

ScalarField2 read_scalar_csv(std::istream& is) {
    return read_field<ScalarField2>(is, 5, [](ScalarField2& f, int i, int j, const std::vector<double>& v) {
        f(i, j) = v[4];
    });
}

VectorField2 read_vector_csv(std::istream& is) {
    return read_field<VectorField2>(is, 6, [](VectorField2& f, int i, int j, const std::vector<double>& v) {
        f.set(i, j, {v[4], v[5]});
    });
}

void write_heatmap_csv(std::ostream& os, const ScalarField2& f, int stride) {
    if (stride < 1) stride = 1;
    const auto old = os.precision(12);
    os << "x,y,value\n";
    const Grid2& g = f.grid;
    for (int j = 0; j < g.ny; j += stride)
        for (int i = 0; i < g.nx; i += stride) os << g.x(i) << ',' << g.y(j) << ',' << f(i, j) << '\n';
    os.precision(old);
}

}  // namespace gauge_lab
