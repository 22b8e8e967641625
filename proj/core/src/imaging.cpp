#include "dseqmark/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "dseqmark/error.hpp"
#include "png_io.hpp"

namespace dseqmark {

namespace fs = std::filesystem;

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative image size");
  samples_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  if (width < 0 || height < 0 ||
      samples_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::InvalidArgument, "sample count does not match width x height");
  }
}

BlockIndex block_at(int linear, int blocks_per_row) noexcept {
  return {linear / blocks_per_row, linear % blocks_per_row, linear};
}

WatermarkBitmap::WatermarkBitmap(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::EmptyBitmap, "watermark has no bits");
  if (fill > 1) throw Error(ErrorCode::InvalidArgument, "watermark bits must be 0 or 1");
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

WatermarkBitmap::WatermarkBitmap(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::EmptyBitmap, "watermark has no bits");
  if (bits_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::InvalidArgument, "bit count does not match width x height");
  }
  if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; })) {
    throw Error(ErrorCode::InvalidArgument, "watermark bits must be 0 or 1");
  }
}

void WatermarkBitmap::set(std::size_t i, std::uint8_t value) {
  if (value > 1) throw Error(ErrorCode::InvalidArgument, "watermark bits must be 0 or 1");
  bits_.at(i) = value;
}

void require_block_aligned(const GrayImage& img) {
  if (img.width() < kBlockSize || img.height() < kBlockSize || !img.block_aligned()) {
    throw Error(ErrorCode::DimensionsNotBlockAligned,
                std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                    " is not a multiple of 8 in both dimensions");
  }
}

namespace {

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::UnreadableFile, "read failed for " + path.string());
  return bytes;
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnwritableDestination, "cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::UnwritableDestination, "write failed for " + path.string());
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

bool is_png(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::equal(kSig, kSig + 8, bytes.begin());
}

// Netpbm header tokenizer: whitespace separated, '#' comments to end of line.
class PnmReader {
 public:
  explicit PnmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  long next_int(const char* what) {
    skip_space_and_comments();
    long value = 0;
    bool any = false;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1L << 30)) throw Error(ErrorCode::UnsupportedFormat, "header value too large");
      ++pos_;
      any = true;
    }
    if (!any) throw Error(ErrorCode::UnsupportedFormat, std::string("missing ") + what);
    return value;
  }

  // Exactly one whitespace byte separates the header from raster data.
  void end_header() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::UnsupportedFormat, "malformed header terminator");
    }
    ++pos_;
  }

  // Plain PBM rasters are digits separated by optional whitespace.
  int next_plain_bit() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) throw Error(ErrorCode::UnsupportedFormat, "truncated P1 raster");
    const auto c = bytes_[pos_++];
    if (c != '0' && c != '1') throw Error(ErrorCode::UnsupportedFormat, "bad P1 raster digit");
    return c - '0';
  }

  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

 private:
  void skip_space_and_comments() {
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

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;  // past the magic number
};

char pnm_magic(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') return 0;
  return static_cast<char>(bytes[1]);
}

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  PnmReader reader(bytes);
  const long width = reader.next_int("width");
  const long height = reader.next_int("height");
  const long maxval = reader.next_int("maxval");
  if (width <= 0 || height <= 0) throw Error(ErrorCode::UnsupportedFormat, "empty PGM");
  if (maxval != 255) {
    throw Error(ErrorCode::MaxvalNot255, "PGM maxval is " + std::to_string(maxval));
  }
  reader.end_header();
  const auto raster = reader.rest();
  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (raster.size() < count) throw Error(ErrorCode::UnsupportedFormat, "truncated P5 raster");
  return GrayImage(static_cast<int>(width), static_cast<int>(height),
                   std::vector<std::uint8_t>(raster.begin(), raster.begin() + count));
}

WatermarkBitmap decode_pbm(std::span<const std::uint8_t> bytes, char magic) {
  PnmReader reader(bytes);
  const long width = reader.next_int("width");
  const long height = reader.next_int("height");
  if (width <= 0 || height <= 0) throw Error(ErrorCode::EmptyBitmap, "PBM has no pixels");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  if (magic == '1') {
    for (auto& b : bits) b = static_cast<std::uint8_t>(reader.next_plain_bit());
  } else {
    reader.end_header();
    const auto raster = reader.rest();
    const auto stride = static_cast<std::size_t>((width + 7) / 8);
    if (raster.size() < stride * static_cast<std::size_t>(height)) {
      throw Error(ErrorCode::UnsupportedFormat, "truncated P4 raster");
    }
    for (long y = 0; y < height; ++y) {
      for (long x = 0; x < width; ++x) {
        const auto byte = raster[static_cast<std::size_t>(y) * stride + static_cast<std::size_t>(x / 8)];
        bits[static_cast<std::size_t>(y * width + x)] = (byte >> (7 - x % 8)) & 1U;
      }
    }
  }
  return WatermarkBitmap(static_cast<int>(width), static_cast<int>(height), std::move(bits));
}

GrayImage decode_any(std::span<const std::uint8_t> bytes, const fs::path& path) {
  if (is_png(bytes)) return detail::decode_png(bytes);
  if (pnm_magic(bytes) == '5') return decode_pgm(bytes);
  throw Error(ErrorCode::UnsupportedFormat,
              path.string() + " is neither binary PGM (P5) nor PNG");
}

}  // namespace

GrayImage load_image(const fs::path& path) {
  const auto bytes = read_file(path);
  return decode_any(bytes, path);
}

void save_image(const GrayImage& img, const fs::path& path) {
  const auto ext = lower_extension(path);
  if (ext == ".png") {
    write_file(path, detail::encode_png(img));
    return;
  }
  if (ext != ".pgm") {
    throw Error(ErrorCode::UnsupportedFormat, "unknown output extension '" + ext + "'");
  }
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.append(img.samples().begin(), img.samples().end());
  write_file(path, out);
}

std::vector<ImageBlock> partition_blocks(const GrayImage& img) {
  require_block_aligned(img);
  const int bpr = img.blocks_per_row();
  std::vector<ImageBlock> blocks(static_cast<std::size_t>(img.block_count()));
  for (int b = 0; b < img.block_count(); ++b) {
    auto& blk = blocks[static_cast<std::size_t>(b)];
    blk.index = block_at(b, bpr);
    for (int y = 0; y < kBlockSize; ++y) {
      for (int x = 0; x < kBlockSize; ++x) {
        blk.samples[y * kBlockSize + x] =
            img.at(blk.index.col * kBlockSize + x, blk.index.row * kBlockSize + y);
      }
    }
  }
  return blocks;
}

GrayImage assemble_blocks(std::span<const ImageBlock> blocks, int width, int height) {
  GrayImage img(width, height);
  require_block_aligned(img);
  if (blocks.size() != static_cast<std::size_t>(img.block_count())) {
    throw Error(ErrorCode::GeometryMismatch, "block count does not cover the image");
  }
  for (const auto& blk : blocks) {
    for (int y = 0; y < kBlockSize; ++y) {
      for (int x = 0; x < kBlockSize; ++x) {
        img.at(blk.index.col * kBlockSize + x, blk.index.row * kBlockSize + y) =
            blk.samples[y * kBlockSize + x];
      }
    }
  }
  return img;
}

WatermarkBitmap load_watermark(const fs::path& path) {
  const auto bytes = read_file(path);
  const char magic = pnm_magic(bytes);
  if (magic == '1' || magic == '4') return decode_pbm(bytes, magic);
  const GrayImage img = decode_any(bytes, path);
  if (img.empty()) throw Error(ErrorCode::EmptyBitmap, path.string() + " has no pixels");
  std::vector<std::uint8_t> bits(img.size());
  std::transform(img.samples().begin(), img.samples().end(), bits.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v < 128 ? 1 : 0); });
  return WatermarkBitmap(img.width(), img.height(), std::move(bits));
}

void save_watermark(const WatermarkBitmap& wm, const fs::path& path) {
  std::string out = "P4\n" + std::to_string(wm.width()) + " " + std::to_string(wm.height()) + "\n";
  const int stride = (wm.width() + 7) / 8;
  std::string row(static_cast<std::size_t>(stride), '\0');
  for (int y = 0; y < wm.height(); ++y) {
    std::fill(row.begin(), row.end(), '\0');
    for (int x = 0; x < wm.width(); ++x) {
      if (wm.at(x, y)) row[static_cast<std::size_t>(x / 8)] |= static_cast<char>(0x80 >> (x % 8));
    }
    out += row;
  }
  write_file(path, out);
}

std::string encode_pbm_ascii(const WatermarkBitmap& wm) {
  std::ostringstream os;
  os << "P1\n" << wm.width() << ' ' << wm.height() << '\n';
  for (int y = 0; y < wm.height(); ++y) {
    for (int x = 0; x < wm.width(); ++x) os << static_cast<int>(wm.at(x, y));
    os << '\n';
  }
  return os.str();
}

GrayImage watermark_to_image(const WatermarkBitmap& wm) {
  std::vector<std::uint8_t> samples(wm.size());
  std::transform(wm.bits().begin(), wm.bits().end(), samples.begin(),
                 [](std::uint8_t b) { return static_cast<std::uint8_t>(b ? 0 : 255); });
  return GrayImage(wm.width(), wm.height(), std::move(samples));
}

}  // namespace dseqmark
