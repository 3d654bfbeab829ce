#include "sni/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

namespace sni {
namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

// Next whitespace-separated header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string tok;
  for (;;) {
    int c = in.get();
    if (c == EOF) break;
    if (c == '#') {
      std::string rest;
      std::getline(in, rest);
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw IoError("truncated header");
  return tok;
}

int header_int(std::istream& in) {
  const std::string t = header_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(t, &used);
    if (used != t.size()) throw IoError("bad header field '" + t + "'");
    return v;
  } catch (const std::logic_error&) {
    throw IoError("bad header field '" + t + "'");
  }
}

void check_dims(int w, int h) {
  if (w <= 0 || h <= 0 || w > (1 << 20) || h > (1 << 20)) {
    throw IoError("implausible image size " + std::to_string(w) + "x" + std::to_string(h));
  }
}

ScalarField read_pgm(std::istream& in, const fs::path& path) {
  const std::string magic = header_token(in);
  if (magic != "P5" && magic != "P2") throw IoError("'" + path.string() + "' is not a PGM file");
  const int w = header_int(in);
  const int h = header_int(in);
  const int maxval = header_int(in);
  check_dims(w, h);
  if (maxval <= 0 || maxval > 65535) throw IoError("bad PGM maxval");
  ScalarField img(w, h);
  if (magic == "P2") {
    for (std::size_t i = 0; i < img.size(); ++i) {
      long v = 0;
      if (!(in >> v)) throw IoError("truncated PGM data in '" + path.string() + "'");
      img[i] = static_cast<double>(v);
    }
    return img;
  }
  const std::size_t bytes = maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raw(img.size() * bytes);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw IoError("truncated PGM data in '" + path.string() + "'");
  }
  for (std::size_t i = 0; i < img.size(); ++i) {
    img[i] = bytes == 1 ? raw[i] : static_cast<double>((raw[2 * i] << 8) | raw[2 * i + 1]);
  }
  return img;
}

ScalarField read_png(const fs::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw IoError("cannot read PNG '" + path.string() + "': " + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("cannot decode PNG '" + path.string() + "': " + image.message);
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  ScalarField img(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = buf[i];
  return img;
}

void write_png(const fs::path& path, const void* data, int width, int height, png_uint_32 format) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, data, 0, nullptr)) {
    throw IoError("cannot write PNG '" + path.string() + "': " + image.message);
  }
}

void read_floats(std::istream& in, std::vector<float>& out, const fs::path& path) {
  in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size() * sizeof(float)));
  if (static_cast<std::size_t>(in.gcount()) != out.size() * sizeof(float)) {
    throw IoError("truncated raster data in '" + path.string() + "'");
  }
}

std::array<std::uint8_t, 3> ramp(double t) {
  // jet: dark blue, cyan, yellow, dark red
  t = std::clamp(t, 0.0, 1.0);
  auto q = [](double v) { return static_cast<std::uint8_t>(std::lround(255 * std::clamp(v, 0.0, 1.0))); };
  return {q(1.5 - std::abs(4 * t - 3)), q(1.5 - std::abs(4 * t - 2)), q(1.5 - std::abs(4 * t - 1))};
}

}  // namespace

ScalarField read_image(const fs::path& path) {
  std::ifstream in = open_in(path);
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  if (in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0) return read_png(path);
  in.clear();
  in.seekg(0);
  return read_pgm(in, path);
}

DomainMask read_mask(const fs::path& path) {
  const ScalarField img = read_image(path);
  DomainMask mask(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) mask.set(x, y, img(x, y) > 127);
  }
  return mask;
}

void write_pgm(const fs::path& path, const Grid<std::uint8_t>& image) {
  std::ofstream out = open_out(path);
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data().data()), static_cast<std::streamsize>(image.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_mask(const fs::path& path, const DomainMask& mask) {
  Grid<std::uint8_t> img(mask.width(), mask.height());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = mask.cells()[i] ? 255 : 0;
  if (path.extension() == ".png") {
    write_png_gray(path, img);
  } else {
    write_pgm(path, img);
  }
}

void write_png_gray(const fs::path& path, const Grid<std::uint8_t>& image) {
  write_png(path, image.data().data(), image.width(), image.height(), PNG_FORMAT_GRAY);
}

void write_png_rgb(const fs::path& path, const Grid<std::array<std::uint8_t, 3>>& image) {
  static_assert(sizeof(std::array<std::uint8_t, 3>) == 3);
  write_png(path, image.data().data(), image.width(), image.height(), PNG_FORMAT_RGB);
}

GradientField read_gradient(const fs::path& path) {
  std::ifstream in = open_in(path);
  if (header_token(in) != "Gf") throw IoError("'" + path.string() + "' is not a gradient file");
  const int w = header_int(in);
  const int h = header_int(in);
  check_dims(w, h);
  GradientField g(w, h);
  std::vector<float> raw(2 * g.p.size());
  read_floats(in, raw, path);
  for (std::size_t i = 0; i < g.p.size(); ++i) {
    g.p[i] = raw[2 * i];
    g.q[i] = raw[2 * i + 1];
  }
  return g;
}

void write_gradient(const fs::path& path, const GradientField& g) {
  std::ofstream out = open_out(path);
  out << "Gf\n" << g.width() << ' ' << g.height() << '\n';
  std::vector<float> raw(2 * g.p.size());
  for (std::size_t i = 0; i < g.p.size(); ++i) {
    raw[2 * i] = static_cast<float>(g.p[i]);
    raw[2 * i + 1] = static_cast<float>(g.q[i]);
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

ScalarField read_pfm(const fs::path& path) {
  std::ifstream in = open_in(path);
  if (header_token(in) != "Pf") throw IoError("'" + path.string() + "' is not a single-channel PFM");
  const int w = header_int(in);
  const int h = header_int(in);
  check_dims(w, h);
  const double scale = std::stod(header_token(in));
  if (scale > 0) throw IoError("big-endian PFM is not supported");
  ScalarField f(w, h);
  std::vector<float> raw(f.size());
  read_floats(in, raw, path);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      f(x, h - 1 - y) = raw[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)];
    }
  }
  return f;
}

void write_pfm(const fs::path& path, const ScalarField& field) {
  std::ofstream out = open_out(path);
  out << "Pf\n" << field.width() << ' ' << field.height() << "\n-1.0\n";
  std::vector<float> raw(field.size());
  const int w = field.width();
  const int h = field.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      raw[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)] =
          static_cast<float>(field(x, h - 1 - y));
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<Vec3> read_lightings(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::vector<Vec3> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    Vec3 l{};
    if (!(ls >> l[0])) continue;
    std::string extra;
    if (!(ls >> l[1] >> l[2]) || (ls >> extra)) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected three numbers");
    }
    const double norm = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
    if (!(norm > 0)) throw IoError(path.string() + ":" + std::to_string(line_no) + ": zero lighting vector");
    out.push_back({l[0] / norm, l[1] / norm, l[2] / norm});
  }
  return out;
}

void write_lightings(const fs::path& path, const std::vector<Vec3>& lightings) {
  std::ofstream out = open_out(path);
  out << std::setprecision(17);
  for (const Vec3& l : lightings) out << l[0] << ' ' << l[1] << ' ' << l[2] << '\n';
}

Grid<std::array<std::uint8_t, 3>> error_colormap(const ScalarField& error, const DomainMask& mask,
                                                  double cap) {
  if (!(cap > 0)) throw std::invalid_argument("error map cap must be > 0");
  Grid<std::array<std::uint8_t, 3>> img(error.width(), error.height(), {0, 0, 0});
  for (int y = 0; y < error.height(); ++y) {
    for (int x = 0; x < error.width(); ++x) {
      if (mask.inside(x, y)) img(x, y) = ramp(error(x, y) / cap);
    }
  }
  return img;
}

void write_error_map(const fs::path& path, const ScalarField& error, const DomainMask& mask, double cap) {
  write_png_rgb(path, error_colormap(error, mask, cap));
}

void write_normal_map(const fs::path& path, const Domain& domain, const NormalField& nf) {
  Grid<std::array<std::uint8_t, 3>> img(domain.width(), domain.height(), {0, 0, 0});
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    const Vec3& n = nf.n(px.x, px.y);
    for (std::size_t c = 0; c < 3; ++c) {
      img(px.x, px.y)[c] = static_cast<std::uint8_t>(std::lround(127.5 * (std::clamp(n[c], -1.0, 1.0) + 1)));
    }
  }
  write_png_rgb(path, img);
}

Grid<std::uint8_t> to_gray8(const ScalarField& field, const DomainMask& mask) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int y = 0; y < field.height(); ++y) {
    for (int x = 0; x < field.width(); ++x) {
      if (!mask.inside(x, y)) continue;
      lo = std::min(lo, field(x, y));
      hi = std::max(hi, field(x, y));
    }
  }
  Grid<std::uint8_t> img(field.width(), field.height(), 0);
  const double span = hi > lo ? hi - lo : 1.0;
  for (int y = 0; y < field.height(); ++y) {
    for (int x = 0; x < field.width(); ++x) {
      if (mask.inside(x, y)) img(x, y) = static_cast<std::uint8_t>(std::lround(255 * (field(x, y) - lo) / span));
    }
  }
  return img;
}

}  // namespace sni
