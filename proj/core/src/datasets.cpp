#include "digits/datasets.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <cstdio>

#include "digits/error.hpp"
#include "digits/random.hpp"

namespace digits {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t offset, const fs::path& path) {
  if (bytes.size() < offset + 4) throw Error(ErrorCode::TruncatedFile, path.string() + ": header cut short");
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                     static_cast<char>(v)};
  out.write(b, 4);
}

void check_magic(std::uint32_t got, std::uint32_t want, const fs::path& path) {
  if (got != want) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ": magic 0x%08x, expected 0x%08x", got, want);
    throw Error(ErrorCode::BadMagic, path.string() + buf);
  }
}

// Minimal PGM header tokenizer: whitespace and '#' comments.
class PgmHeader {
 public:
  explicit PgmHeader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::optional<long> number() {
    skip_space();
    long v = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (++digits > 9) return std::nullopt;
    }
    if (digits == 0) return std::nullopt;
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

bool has_p5_magic(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5';
}

GrayImage parse_pgm(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
  if (!has_p5_magic(bytes)) throw Error(ErrorCode::BadMagic, path.string() + ": not a binary PGM (P5)");
  PgmHeader header(bytes);
  header.advance(2);
  const auto width = header.number();
  const auto height = header.number();
  const auto maxval = header.number();
  if (!width || !height || !maxval || *width < 1 || *height < 1) {
    throw Error(ErrorCode::TruncatedFile, path.string() + ": malformed PGM header");
  }
  if (*maxval < 1 || *maxval > 255) {
    throw Error(ErrorCode::BadMagic, path.string() + ": only 8-bit PGM is supported");
  }
  const std::size_t start = header.pos() + 1;  // single whitespace after maxval
  const std::size_t n = static_cast<std::size_t>(*width) * static_cast<std::size_t>(*height);
  if (bytes.size() < start + n) throw Error(ErrorCode::TruncatedFile, path.string() + ": pixel data cut short");
  std::vector<std::uint8_t> px(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                               bytes.begin() + static_cast<std::ptrdiff_t>(start + n));
  if (*maxval != 255) {
    for (auto& p : px) p = static_cast<std::uint8_t>(std::min<long>(255, p * 255L / *maxval));
  }
  return GrayImage(static_cast<int>(*width), static_cast<int>(*height), std::move(px));
}

}  // namespace

std::vector<LabeledImage> load_idx(const fs::path& images, const fs::path& labels) {
  const auto img_bytes = read_bytes(images);
  const auto lbl_bytes = read_bytes(labels);

  check_magic(read_be32(img_bytes, 0, images), kIdxImageMagic, images);
  check_magic(read_be32(lbl_bytes, 0, labels), kIdxLabelMagic, labels);

  const std::uint32_t count = read_be32(img_bytes, 4, images);
  const std::uint32_t rows = read_be32(img_bytes, 8, images);
  const std::uint32_t cols = read_be32(img_bytes, 12, images);
  const std::uint32_t label_count = read_be32(lbl_bytes, 4, labels);
  if (count != label_count) {
    throw Error(ErrorCode::CountMismatch,
                std::to_string(count) + " images but " + std::to_string(label_count) + " labels");
  }
  if (rows == 0 || cols == 0 || rows > 65536 || cols > 65536) {
    throw Error(ErrorCode::InvalidArgument, images.string() + ": implausible image size");
  }
  const std::size_t pixels = std::size_t{rows} * cols;
  if (img_bytes.size() < 16 + std::size_t{count} * pixels) {
    throw Error(ErrorCode::TruncatedFile, images.string() + ": pixel data cut short");
  }
  if (lbl_bytes.size() < 8 + std::size_t{count}) {
    throw Error(ErrorCode::TruncatedFile, labels.string() + ": label data cut short");
  }

  std::vector<LabeledImage> out;
  out.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    const Label label = lbl_bytes[8 + k];
    if (!is_valid_label(label)) {
      throw Error(ErrorCode::InvalidArgument, labels.string() + ": label " + std::to_string(label) + " at index " +
                                                  std::to_string(k) + " is not a digit");
    }
    const auto first = img_bytes.begin() + static_cast<std::ptrdiff_t>(16 + k * pixels);
    std::vector<std::uint8_t> px(first, first + static_cast<std::ptrdiff_t>(pixels));
    out.push_back({GrayImage(static_cast<int>(cols), static_cast<int>(rows), std::move(px)), label,
                   images.filename().string() + "#" + std::to_string(k)});
  }
  return out;
}

void save_idx(std::span<const LabeledImage> data, const fs::path& images, const fs::path& labels) {
  int width = 0, height = 0;
  for (const auto& s : data) {
    const auto* g = std::get_if<GrayImage>(&s.image);
    if (!g) throw Error(ErrorCode::InvalidArgument, "IDX export needs grayscale images");
    if (width == 0) {
      width = g->width();
      height = g->height();
    } else if (g->width() != width || g->height() != height) {
      throw Error(ErrorCode::DimensionMismatch, "IDX export needs equally sized images");
    }
  }
  std::ofstream img(images, std::ios::binary);
  std::ofstream lbl(labels, std::ios::binary);
  if (!img || !lbl) throw Error(ErrorCode::Io, "cannot write IDX output");
  put_be32(img, kIdxImageMagic);
  put_be32(img, static_cast<std::uint32_t>(data.size()));
  put_be32(img, static_cast<std::uint32_t>(height));
  put_be32(img, static_cast<std::uint32_t>(width));
  put_be32(lbl, kIdxLabelMagic);
  put_be32(lbl, static_cast<std::uint32_t>(data.size()));
  for (const auto& s : data) {
    const auto px = std::get<GrayImage>(s.image).pixels();
    img.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    lbl.put(static_cast<char>(s.label));
  }
  if (!img || !lbl) throw Error(ErrorCode::Io, "failed writing IDX output");
}

GrayImage read_pgm(const fs::path& path) { return parse_pgm(read_bytes(path), path); }

void write_pgm(const GrayImage& img, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()), static_cast<std::streamsize>(img.pixels().size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

DirectoryLoad load_dir(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error(ErrorCode::MissingRoot, root.string() + " is not a directory");

  DirectoryLoad result;
  for (Label d = 0; d < kNumClasses; ++d) {
    const fs::path sub = root / std::to_string(d);
    if (!fs::is_directory(sub, ec)) continue;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(sub)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const auto bytes = read_bytes(f);
      if (!has_p5_magic(bytes)) {
        ++result.skipped;
        continue;
      }
      GrayImage img;
      try {
        img = parse_pgm(bytes, f);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BadMagic) throw;
        ++result.skipped;
        continue;
      }
      result.samples.push_back({std::move(img), d, (fs::path(std::to_string(d)) / f.filename()).string()});
    }
  }
  if (result.samples.empty()) throw Error(ErrorCode::NoSamples, "no PGM samples under " + root.string());
  return result;
}

std::vector<LabeledImage> synth_digits(std::size_t per_class, std::uint64_t seed, double noise) {
  if (per_class < 1) throw Error(ErrorCode::InvalidArgument, "per_class must be at least 1");
  if (!(noise >= 0.0 && noise <= 1.0)) throw Error(ErrorCode::InvalidArgument, "noise must lie in [0,1]");

  constexpr int kGlyph = 16;
  Rng rng(seed);
  std::vector<LabeledImage> out;
  out.reserve(per_class * kNumClasses);
  for (std::size_t k = 0; k < per_class; ++k) {
    for (Label label = 0; label < kNumClasses; ++label) {
      const auto rows = glyph_template(label);
      const double scale = rng.uniform(0.85, 1.15);
      const int size = std::max(1, static_cast<int>(std::lround(kGlyph * scale)));
      const int tx = static_cast<int>(rng.below(7)) - 3;
      const int ty = static_cast<int>(rng.below(7)) - 3;
      const int left = (kCanvas - size) / 2 + tx;
      const int top = (kCanvas - size) / 2 + ty;

      GrayImage img(kCanvas, kCanvas, std::uint8_t{255});
      for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
          const int cx = left + x, cy = top + y;
          if (cx < 0 || cy < 0 || cx >= kCanvas || cy >= kCanvas) continue;
          if (rows[static_cast<std::size_t>(y * kGlyph / size)][x * kGlyph / size] == '#') img.set(cx, cy, 0);
        }
      }
      for (int y = 0; y < kCanvas; ++y) {
        for (int x = 0; x < kCanvas; ++x) {
          if (rng.uniform01() < noise) img.set(x, y, img.at(x, y) == 0 ? 255 : 0);
        }
      }
      out.push_back({std::move(img), label, "synth#" + std::to_string(out.size())});
    }
  }
  return out;
}

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train_fraction must lie strictly between 0 and 1");
  }
}

SplitIndices split_indices(std::span<const Label> labels, const SplitSpec& spec) {
  spec.validate();
  if (labels.empty()) throw Error(ErrorCode::EmptyDataset, "cannot split an empty dataset");

  // floor(f * n) with slack for fractions like 2/3 that are not exact in binary.
  auto train_count = [&](std::size_t n) {
    return static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(n) + 1e-9));
  };

  Rng rng(spec.seed);
  std::map<Label, std::vector<std::size_t>> strata;
  if (spec.stratified) {
    for (std::size_t i = 0; i < labels.size(); ++i) strata[labels[i]].push_back(i);
  } else {
    auto& all = strata[0];
    all.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) all[i] = i;
  }

  SplitIndices out;
  for (auto& [label, idx] : strata) {
    rng.shuffle(std::span<std::size_t>(idx));
    const std::size_t n_train = train_count(idx.size());
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.insert(out.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<std::vector<LabeledImage>, std::vector<LabeledImage>> split(std::span<const LabeledImage> data,
                                                                      const SplitSpec& spec) {
  std::vector<Label> labels;
  labels.reserve(data.size());
  for (const auto& s : data) labels.push_back(s.label);
  const auto idx = split_indices(labels, spec);
  std::pair<std::vector<LabeledImage>, std::vector<LabeledImage>> out;
  for (std::size_t i : idx.train) out.first.push_back(data[i]);
  for (std::size_t i : idx.test) out.second.push_back(data[i]);
  return out;
}

}  // namespace digits
