#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "sni/domain.hpp"
#include "sni/grid.hpp"
#include "sni/photometric.hpp"

namespace sni {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace fs = std::filesystem;

// Grayscale PGM (P2/P5, 8 or 16 bit) or PNG, chosen by file signature.
// Values are returned unscaled (0..maxval).
ScalarField read_image(const fs::path& path);
// Cells with value > 127 are inside.
DomainMask read_mask(const fs::path& path);

void write_pgm(const fs::path& path, const Grid<std::uint8_t>& image);
void write_mask(const fs::path& path, const DomainMask& mask);
void write_png_gray(const fs::path& path, const Grid<std::uint8_t>& image);
void write_png_rgb(const fs::path& path, const Grid<std::array<std::uint8_t, 3>>& image);

// Two-channel float32 little-endian raster, rows top to bottom, with the text
// header "Gf\n<width> <height>\n" followed by interleaved (p, q).
GradientField read_gradient(const fs::path& path);
void write_gradient(const fs::path& path, const GradientField& g);

// Single-channel PFM ("Pf", little-endian, rows bottom to top).
ScalarField read_pfm(const fs::path& path);
void write_pfm(const fs::path& path, const ScalarField& field);

// One "lx ly lz" triple per line; '#' starts a comment. Normalised to unit length.
std::vector<Vec3> read_lightings(const fs::path& path);
void write_lightings(const fs::path& path, const std::vector<Vec3>& lightings);

// Blue for 0 through cyan, yellow to red at `cap`; black outside the mask.
Grid<std::array<std::uint8_t, 3>> error_colormap(const ScalarField& error, const DomainMask& mask,
                                                  double cap);
void write_error_map(const fs::path& path, const ScalarField& error, const DomainMask& mask, double cap);
// RGB = 255 * (n + 1) / 2; black outside the domain.
void write_normal_map(const fs::path& path, const Domain& domain, const NormalField& nf);

// Linear 8-bit quantisation of `field` over the mask (min -> 0, max -> 255).
Grid<std::uint8_t> to_gray8(const ScalarField& field, const DomainMask& mask);

}  // namespace sni
