#include "m2c/cloud_io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "m2c/errors.hpp"

namespace m2c {

namespace {

// Explicit little-endian codecs keep the format fixed on any host.
void put_u16(unsigned char* out, std::uint16_t v) {
    out[0] = static_cast<unsigned char>(v & 0xff);
    out[1] = static_cast<unsigned char>(v >> 8);
}

void put_u64(unsigned char* out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

std::uint16_t get_u16(const unsigned char* in) {
    return static_cast<std::uint16_t>(in[0] | (in[1] << 8));
}

std::uint64_t get_u64(const unsigned char* in) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(in[i]) << (8 * i);
    return v;
}

void put_f64(unsigned char* out, double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof(b));
    put_u64(out, b);
}

double get_f64(const unsigned char* in) {
    std::uint64_t b = get_u64(in);
    double v;
    std::memcpy(&v, &b, sizeof(v));
    return v;
}

void put_f32(unsigned char* out, float v) {
    std::uint32_t b;
    std::memcpy(&b, &v, sizeof(b));
    for (int i = 0; i < 4; ++i) out[i] = static_cast<unsigned char>(b >> (8 * i));
}

float get_f32(const unsigned char* in) {
    std::uint32_t b = 0;
    for (int i = 0; i < 4; ++i) b |= std::uint32_t(in[i]) << (8 * i);
    float v;
    std::memcpy(&v, &b, sizeof(v));
    return v;
}

void read_exact(std::istream& in, void* buf, std::size_t bytes, const char* what) {
    if (bytes == 0) return;
    in.read(static_cast<char*>(buf), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes)
        throw TruncatedFile(std::string("short read in ") + what + " (wanted " +
                            std::to_string(bytes) + " bytes, got " +
                            std::to_string(in.gcount()) + ")");
}

void validate_intensity(float v, std::size_t i) {
    if (!(v >= 0.0f && v <= 1.0f))
        throw IntensityOutOfRange("point " + std::to_string(i) + ": intensity " +
                                  std::to_string(v) + " outside [0,1]");
}

void validate_label(std::uint8_t v, std::size_t k, std::size_t i, const char* which) {
    if (v != UNLABELED && v >= k)
        throw LabelOutOfRange("point " + std::to_string(i) + ": " + which + " label " +
                              std::to_string(v) + " outside taxonomy of " +
                              std::to_string(k) + " classes");
}

} // namespace

LabeledCloud read_cloud(std::istream& source) {
    unsigned char header[kCloudHeaderSize];
    read_exact(source, header, sizeof(header), "header");

    if (std::memcmp(header, kCloudMagic, sizeof(kCloudMagic)) != 0)
        throw BadMagic("not a cloud file (magic mismatch)");
    std::uint16_t version = get_u16(header + 8);
    if (version != kCloudVersion)
        throw BadVersion("unsupported version " + std::to_string(version));
    std::uint8_t tax_byte = header[10];
    if (tax_byte > 1)
        throw BadVersion("unknown taxonomy byte " + std::to_string(tax_byte));
    std::uint64_t n = get_u64(header + 12);
    if (n > (1ull << 40))
        throw TruncatedFile("implausible point count " + std::to_string(n));

    LabeledCloud cloud;
    cloud.taxonomy_id = tax_byte == 0 ? TaxonomyId::Gold : TaxonomyId::Silver;
    const std::size_t k = taxonomy_for(cloud.taxonomy_id).size();

    cloud.x.resize(n);
    cloud.y.resize(n);
    cloud.z.resize(n);
    cloud.r.resize(n);
    cloud.g.resize(n);
    cloud.b.resize(n);
    cloud.intensity.resize(n);
    cloud.real_label.resize(n);
    cloud.pseudo_label.resize(n);

    std::vector<unsigned char> buf(n * 8);
    auto read_f64_column = [&](std::vector<double>& col, const char* what) {
        read_exact(source, buf.data(), n * 8, what);
        for (std::size_t i = 0; i < n; ++i) col[i] = get_f64(buf.data() + 8 * i);
    };
    read_f64_column(cloud.x, "x column");
    read_f64_column(cloud.y, "y column");
    read_f64_column(cloud.z, "z column");

    read_exact(source, cloud.r.data(), n, "r column");
    read_exact(source, cloud.g.data(), n, "g column");
    read_exact(source, cloud.b.data(), n, "b column");

    read_exact(source, buf.data(), n * 4, "intensity column");
    for (std::size_t i = 0; i < n; ++i) {
        cloud.intensity[i] = get_f32(buf.data() + 4 * i);
        validate_intensity(cloud.intensity[i], i);
    }

    read_exact(source, cloud.real_label.data(), n, "real label column");
    read_exact(source, cloud.pseudo_label.data(), n, "pseudo label column");
    for (std::size_t i = 0; i < n; ++i) {
        validate_label(cloud.real_label[i], k, i, "real");
        validate_label(cloud.pseudo_label[i], k, i, "pseudo");
    }
    return cloud;
}

LabeledCloud read_cloud_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open cloud file '" + path + "'");
    LabeledCloud cloud = read_cloud(in);
    cloud.scan_id = std::filesystem::path(path).stem().string();
    return cloud;
}

void write_cloud(const LabeledCloud& cloud, std::ostream& sink) {
    const std::size_t n = cloud.size();
    const std::size_t k = taxonomy_for(cloud.taxonomy_id).size();
    for (std::size_t i = 0; i < n; ++i) {
        validate_intensity(cloud.intensity[i], i);
        validate_label(cloud.real_label[i], k, i, "real");
        validate_label(cloud.pseudo_label[i], k, i, "pseudo");
    }

    unsigned char header[kCloudHeaderSize] = {};
    std::memcpy(header, kCloudMagic, sizeof(kCloudMagic));
    put_u16(header + 8, kCloudVersion);
    header[10] = cloud.taxonomy_id == TaxonomyId::Gold ? 0 : 1;
    header[11] = 0; // flags
    put_u64(header + 12, n);
    sink.write(reinterpret_cast<const char*>(header), sizeof(header));

    std::vector<unsigned char> buf(n * 8);
    auto put_bytes = [&](const void* data, std::size_t bytes) {
        if (bytes == 0) return;
        sink.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
    };
    auto write_f64_column = [&](const std::vector<double>& col) {
        for (std::size_t i = 0; i < n; ++i) put_f64(buf.data() + 8 * i, col[i]);
        put_bytes(buf.data(), n * 8);
    };
    write_f64_column(cloud.x);
    write_f64_column(cloud.y);
    write_f64_column(cloud.z);

    put_bytes(cloud.r.data(), n);
    put_bytes(cloud.g.data(), n);
    put_bytes(cloud.b.data(), n);

    for (std::size_t i = 0; i < n; ++i) put_f32(buf.data() + 4 * i, cloud.intensity[i]);
    put_bytes(buf.data(), n * 4);

    put_bytes(cloud.real_label.data(), n);
    put_bytes(cloud.pseudo_label.data(), n);
    if (!sink) throw IoError("failed writing cloud stream");
}

void write_cloud_file(const LabeledCloud& cloud, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_cloud(cloud, out);
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

LabeledCloud read_cloud_ascii(std::istream& source, TaxonomyId taxonomy) {
    LabeledCloud cloud;
    cloud.taxonomy_id = taxonomy;
    const std::size_t k = taxonomy_for(taxonomy).size();

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double x, y, z;
        int r, g, b, real, pseudo;
        float intensity;
        if (!(ls >> x >> y >> z >> r >> g >> b >> intensity >> real >> pseudo))
            throw ParseError("line " + std::to_string(line_no) + ": expected 9 fields");
        auto check_byte = [&](int v, const char* what) {
            if (v < 0 || v > 255)
                throw ParseError("line " + std::to_string(line_no) + ": " + what +
                                 " value " + std::to_string(v) + " outside [0,255]");
            return static_cast<std::uint8_t>(v);
        };
        PointRecord p;
        p.position = {x, y, z};
        p.r = check_byte(r, "r");
        p.g = check_byte(g, "g");
        p.b = check_byte(b, "b");
        validate_intensity(intensity, line_no - 1);
        p.intensity = intensity;
        p.real_label = check_byte(real, "real label");
        p.pseudo_label = check_byte(pseudo, "pseudo label");
        validate_label(p.real_label, k, line_no - 1, "real");
        validate_label(p.pseudo_label, k, line_no - 1, "pseudo");
        cloud.push_back(p);
    }
    return cloud;
}

void write_cloud_ascii(const LabeledCloud& cloud, std::ostream& sink) {
    char buf[160];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %u %u %u %.9g %u %u\n",
                      cloud.x[i], cloud.y[i], cloud.z[i], cloud.r[i], cloud.g[i],
                      cloud.b[i], static_cast<double>(cloud.intensity[i]),
                      cloud.real_label[i], cloud.pseudo_label[i]);
        sink << buf;
    }
    if (!sink) throw IoError("failed writing ascii cloud stream");
}

} // namespace m2c
