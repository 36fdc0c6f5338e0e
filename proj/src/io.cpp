#include "pat/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>
#include <png.h>

static_assert(std::endian::native == std::endian::little,
              "binary container assumes a little-endian host");

namespace pat {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'P', 'A', 'T', 'R', 'E', 'C', 'O', 'N'};

struct Header {
    char magic[8];
    std::uint32_t version;
    std::uint32_t json_len;
};
static_assert(sizeof(Header) == 16);

class AtomicFile {
  public:
    explicit AtomicFile(const std::filesystem::path& target) : target_(target) {
        tmp_ = target;
        tmp_ += ".tmp" + std::to_string(std::random_device{}());
        out_.open(tmp_, std::ios::binary | std::ios::trunc);
        require(out_.good(), ErrorKind::io, "cannot open " + tmp_.string() + " for writing");
    }
    ~AtomicFile() {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            std::filesystem::remove(tmp_, ec);
        }
    }
    std::ofstream& stream() { return out_; }
    void commit() {
        out_.close();
        require(out_.good(), ErrorKind::io, "write failed for " + target_.string());
        std::filesystem::rename(tmp_, target_);
        committed_ = true;
    }

  private:
    std::filesystem::path target_, tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

void write_container(const std::filesystem::path& path, const json& meta, const double* payload,
                     std::size_t count) {
    std::string meta_str = meta.dump();
    Header h{};
    std::memcpy(h.magic, kMagic, 8);
    h.version = kFormatVersion;
    h.json_len = static_cast<std::uint32_t>(meta_str.size());

    AtomicFile file(path);
    file.stream().write(reinterpret_cast<const char*>(&h), sizeof(h));
    file.stream().write(meta_str.data(), meta_str.size());
    file.stream().write(reinterpret_cast<const char*>(payload), sizeof(double) * count);
    file.commit();
}

json read_container(const std::filesystem::path& path, std::vector<double>& payload) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::io, "cannot open " + path.string());

    Header h{};
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    require(in.good() && std::memcmp(h.magic, kMagic, 8) == 0, ErrorKind::io,
            path.string() + ": not a PATRECON container");
    require(h.version == kFormatVersion, ErrorKind::io,
            path.string() + ": unsupported container version " + std::to_string(h.version));

    std::string meta_str(h.json_len, '\0');
    in.read(meta_str.data(), h.json_len);
    require(in.good(), ErrorKind::io, path.string() + ": truncated metadata");
    json meta = json::parse(meta_str, nullptr, false);
    require(!meta.is_discarded(), ErrorKind::io, path.string() + ": bad metadata JSON");

    payload.clear();
    double v;
    while (in.read(reinterpret_cast<char*>(&v), sizeof(double))) payload.push_back(v);
    return meta;
}

} // namespace

void write_image(const std::filesystem::path& path, const Image& img, const json& provenance) {
    require(img.all_finite(), ErrorKind::numeric, "refusing to write non-finite image");
    json meta = {
        {"kind", "image"},        {"nx", img.nx()},
        {"ny", img.ny()},         {"dx_mm", img.grid().dx},
        {"dy_mm", img.grid().dy}, {"units", "Pa"},
        {"layout", "row-major"},
    };
    if (!provenance.is_null()) meta["provenance"] = provenance;
    write_container(path, meta, img.data(), img.size());
}

void write_image(const std::filesystem::path& path, const Image& img) {
    write_image(path, img, json());
}

Image read_image(const std::filesystem::path& path, json* metadata) {
    std::vector<double> payload;
    json meta = read_container(path, payload);
    require(meta.value("kind", "") == "image", ErrorKind::io, path.string() + ": not an image");
    ImageGrid grid(meta.at("nx").get<int>(), meta.at("ny").get<int>(), meta.at("dx_mm").get<double>(),
                   meta.at("dy_mm").get<double>());
    require(payload.size() == grid.count(), ErrorKind::io, path.string() + ": payload size mismatch");
    Image img(grid, std::move(payload));
    require(img.all_finite(), ErrorKind::numeric, path.string() + ": non-finite values");
    if (metadata) *metadata = std::move(meta);
    return img;
}

void write_measurements(const std::filesystem::path& path, const Measurements& meas,
                        const json& provenance) {
    require(meas.all_finite(), ErrorKind::numeric, "refusing to write non-finite measurements");
    json meta = {
        {"kind", "measurements"}, {"l_sensors", meas.l_sensors()}, {"m_samples", meas.m_samples()},
        {"dt_us", meas.dt_us()},  {"units", "Pa"},                 {"layout", "row-major"},
    };
    if (!provenance.is_null()) meta["provenance"] = provenance;
    write_container(path, meta, meas.data(), meas.size());
}

void write_measurements(const std::filesystem::path& path, const Measurements& meas) {
    write_measurements(path, meas, json());
}

Measurements read_measurements(const std::filesystem::path& path, json* metadata) {
    std::vector<double> payload;
    json meta = read_container(path, payload);
    require(meta.value("kind", "") == "measurements", ErrorKind::io,
            path.string() + ": not a measurements file");
    int l = meta.at("l_sensors").get<int>();
    int m = meta.at("m_samples").get<int>();
    double dt = meta.at("dt_us").get<double>();
    require(payload.size() == static_cast<std::size_t>(l) * m, ErrorKind::io,
            path.string() + ": payload size mismatch");
    Measurements meas(l, m, dt, std::move(payload));
    require(meas.all_finite(), ErrorKind::numeric, path.string() + ": non-finite values");
    if (metadata) *metadata = std::move(meta);
    return meas;
}

std::pair<double, double> write_png(const std::filesystem::path& path, const Image& img) {
    double lo = min_value(img);
    double hi = max_value(img);
    double span = hi > lo ? hi - lo : 1.0;

    std::vector<png_byte> row(img.nx());
    FILE* fp = std::fopen(path.string().c_str(), "wb");
    require(fp != nullptr, ErrorKind::io, "cannot open " + path.string() + " for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw Error(ErrorKind::io, "libpng write failure for " + path.string());
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, img.nx(), img.ny(), 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int iy = 0; iy < img.ny(); ++iy) {
        for (int ix = 0; ix < img.nx(); ++ix) {
            double t = (img.at(ix, iy) - lo) / span;
            row[ix] = static_cast<png_byte>(std::lround(t * 255.0));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    return {lo, hi};
}

Image read_png(const std::filesystem::path& path, double dx_mm, double dy_mm) {
    FILE* fp = std::fopen(path.string().c_str(), "rb");
    require(fp != nullptr, ErrorKind::io, "cannot open " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw Error(ErrorKind::io, "libpng read failure for " + path.string());
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    png_uint_32 width = png_get_image_width(png, info);
    png_uint_32 height = png_get_image_height(png, info);
    int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);
    if (color != PNG_COLOR_TYPE_GRAY || (depth != 8 && depth != 16)) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw Error(ErrorKind::io, path.string() + ": expected 8/16-bit grayscale PNG");
    }
    if (depth == 16) png_set_swap(png); // PNG payload is big-endian

    ImageGrid grid(static_cast<int>(width), static_cast<int>(height), dx_mm, dy_mm);
    Image img(grid);
    double denom = depth == 8 ? 255.0 : 65535.0;
    std::vector<png_byte> row(width * (depth / 8));
    for (png_uint_32 iy = 0; iy < height; ++iy) {
        png_read_row(png, row.data(), nullptr);
        for (png_uint_32 ix = 0; ix < width; ++ix) {
            double v = depth == 8 ? row[ix]
                                  : reinterpret_cast<const std::uint16_t*>(row.data())[ix];
            img.at(static_cast<int>(ix), static_cast<int>(iy)) = v / denom;
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return img;
}

} // namespace pat
