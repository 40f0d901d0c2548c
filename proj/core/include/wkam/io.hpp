#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wkam/aubry.hpp"
#include "wkam/barrier.hpp"
#include "wkam/cube_cover.hpp"
#include "wkam/grid.hpp"
#include "wkam/whitney.hpp"

namespace wkam::io {

// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);

// index, x0[, x1, x2], value
void write_field_csv(std::ostream& os, const ScalarField& f);
ScalarField read_field_csv(std::istream& is, const PeriodicGrid& grid);

// source, target, value with grid node indices.
void write_barrier_csv(std::ostream& os, const BarrierMatrix& m);

struct DenseMatrix {
  std::uint32_t rows = 0, cols = 0;
  std::vector<double> values;
};

// "AKBM", u32 rows, u32 cols, then rows·cols little-endian doubles.
void write_akbm(std::ostream& os, const BarrierMatrix& m);
DenseMatrix read_akbm(std::istream& is);

std::string quotient_json(const QuotientSpace& q, const ComponentReport& report);
void write_quotient_csv(std::ostream& os, const QuotientSpace& q);

std::string cube_cover_json(const CubeCover& cover, const PeriodicGrid& grid);
void write_cube_cover_csv(std::ostream& os, const CubeCover& cover, const PeriodicGrid& grid);

std::string whitney_json(const WhitneyDecomposition& dec);
void write_whitney_csv(std::ostream& os, const WhitneyDecomposition& dec);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace wkam::io
