#include "sar/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sar/errors.hpp"

namespace sar {

namespace {

constexpr std::uint8_t kFormatVersion = 1;
constexpr std::uint64_t kMaxPixels = 1ull << 31;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

class Reader {
public:
    Reader(const std::filesystem::path& path) : path_(path.string()) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open " + path_);
        std::ostringstream ss;
        ss << f.rdbuf();
        buf_ = ss.str();
    }

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(buf_[pos_++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(buf_[pos_ + i])) << (8 * i);
        }
        pos_ += 4;
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) {
            bits |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(buf_[pos_ + i])) << (8 * i);
        }
        pos_ += 8;
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    void magic(const char* expect) {
        need(4);
        if (std::memcmp(buf_.data() + pos_, expect, 4) != 0) {
            throw IoError(path_ + ": bad magic, expected " + expect);
        }
        pos_ += 4;
    }
    void done() {
        if (pos_ != buf_.size()) throw IoError(path_ + ": trailing bytes after payload");
    }

private:
    void need(std::size_t n) {
        if (pos_ + n > buf_.size()) throw IoError(path_ + ": truncated file");
    }
    std::string path_;
    std::string buf_;
    std::size_t pos_ = 0;
};

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failed on " + path.string());
}

void check_dims(int n_az, int n_rg, const std::string& what) {
    if (n_az < 1 || n_rg < 1) throw IoError(what + ": dimensions must be >= 1");
    if (static_cast<std::uint64_t>(n_az) * static_cast<std::uint64_t>(n_rg) > kMaxPixels) {
        throw IoError(what + ": dimensions overflow the pixel budget");
    }
}

} // namespace

void write_image(const std::filesystem::path& path, const ComplexImage& img) {
    check_dims(img.n_az, img.n_rg, path.string());
    img.validate();
    std::string out;
    out.reserve(40 + img.data.size() * 16);
    out.append("SARC");
    out.push_back(static_cast<char>(kFormatVersion));
    out.push_back(static_cast<char>(img.domain));
    out.push_back(0);
    out.push_back(0);
    put_u32(out, static_cast<std::uint32_t>(img.n_az));
    put_u32(out, static_cast<std::uint32_t>(img.n_rg));
    put_f64(out, img.t0);
    put_f64(out, img.dt);
    put_f64(out, img.eta0);
    put_f64(out, img.deta);
    for (const auto& z : img.data) {
        put_f64(out, z.real());
        put_f64(out, z.imag());
    }
    write_file(path, out);
}

void write_image(const std::filesystem::path& path, const MagnitudeImage& img) {
    check_dims(img.n_az, img.n_rg, path.string());
    img.validate();
    std::string out;
    out.reserve(16 + img.data.size() * 8);
    out.append("SARM");
    out.push_back(static_cast<char>(kFormatVersion));
    out.push_back(0);
    out.push_back(0);
    out.push_back(0);
    put_u32(out, static_cast<std::uint32_t>(img.n_az));
    put_u32(out, static_cast<std::uint32_t>(img.n_rg));
    for (double v : img.data) put_f64(out, v);
    write_file(path, out);
}

ComplexImage read_complex_image(const std::filesystem::path& path) {
    Reader r(path);
    r.magic("SARC");
    const auto version = r.u8();
    if (version != kFormatVersion) {
        throw IoError(path.string() + ": unsupported format version");
    }
    const auto domain = r.u8();
    r.u8();
    r.u8();
    const auto n_az = r.u32();
    const auto n_rg = r.u32();
    check_dims(static_cast<int>(n_az), static_cast<int>(n_rg), path.string());
    ComplexImage img(static_cast<int>(n_az), static_cast<int>(n_rg));
    img.domain = static_cast<Domain>(domain);
    img.t0 = r.f64();
    img.dt = r.f64();
    img.eta0 = r.f64();
    img.deta = r.f64();
    for (auto& z : img.data) {
        const double re = r.f64();
        const double im = r.f64();
        z = {re, im};
    }
    r.done();
    return img;
}

MagnitudeImage read_magnitude_image(const std::filesystem::path& path) {
    Reader r(path);
    r.magic("SARM");
    const auto version = r.u8();
    if (version != kFormatVersion) {
        throw IoError(path.string() + ": unsupported format version");
    }
    r.u8();
    r.u8();
    r.u8();
    const auto n_az = r.u32();
    const auto n_rg = r.u32();
    check_dims(static_cast<int>(n_az), static_cast<int>(n_rg), path.string());
    MagnitudeImage img(static_cast<int>(n_az), static_cast<int>(n_rg));
    for (auto& v : img.data) v = r.f64();
    r.done();
    return img;
}

void export_pgm(const MagnitudeImage& img, const std::filesystem::path& path, double db_floor) {
    img.validate();
    if (!(db_floor < 0.0)) throw std::invalid_argument("db_floor must be negative");
    double max = 0.0;
    for (double v : img.data) max = std::max(max, v);

    std::string out = "P5\n" + std::to_string(img.n_rg) + " " + std::to_string(img.n_az) + "\n255\n";
    out.reserve(out.size() + img.data.size());
    for (double v : img.data) {
        int pixel = 0;
        if (v > 0.0 && max > 0.0) {
            const double db = 20.0 * std::log10(v / max);
            pixel = static_cast<int>(std::lround(255.0 * (db - db_floor) / (-db_floor)));
            pixel = std::clamp(pixel, 0, 255);
        }
        out.push_back(static_cast<char>(pixel));
    }
    write_file(path, out);
}

void export_pbm(const DetectionMap& map, const std::filesystem::path& path) {
    std::string out = "P4\n" + std::to_string(map.n_rg) + " " + std::to_string(map.n_az) + "\n";
    for (int r = 0; r < map.n_az; ++r) {
        for (int c = 0; c < map.n_rg; c += 8) {
            std::uint8_t byte = 0;
            for (int bit = 0; bit < 8 && c + bit < map.n_rg; ++bit) {
                if (map.at(r, c + bit)) byte |= static_cast<std::uint8_t>(0x80 >> bit);
            }
            out.push_back(static_cast<char>(byte));
        }
    }
    write_file(path, out);
}

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace

void write_histogram_csv(const EmpiricalPdf& pdf, const std::filesystem::path& path) {
    std::string out = "bin_lo,bin_hi,density\n";
    for (std::size_t i = 0; i < pdf.bins(); ++i) {
        out += fmt_double(pdf.bin_edges[i]) + "," + fmt_double(pdf.bin_edges[i + 1]) + "," +
               fmt_double(pdf.density[i]) + "\n";
    }
    write_file(path, out);
}

void write_detections_csv(const DetectionMap& map, const std::filesystem::path& path) {
    std::string out = "row,col,amplitude,threshold\n";
    for (const auto& d : map.detections) {
        out += std::to_string(d.row) + "," + std::to_string(d.col) + "," +
               fmt_double(d.amplitude) + "," + fmt_double(d.threshold) + "\n";
    }
    write_file(path, out);
}

void write_kl_csv(const KlReport& report, const std::filesystem::path& path) {
    std::string out = "family,p1,p2,kl\n";
    for (const auto& e : report.entries) {
        out += std::string(family_name(e.family)) + ",";
        if (e.fitted) {
            out += fmt_double(e.model.p1) + ",";
            out += (e.family == DistFamily::Rayleigh ? std::string() : fmt_double(e.model.p2));
            out += "," + fmt_double(e.kl);
        } else {
            out += ",,";
        }
        out += "\n";
    }
    write_file(path, out);
}

void write_fits_csv(const std::vector<FittedModel>& fits, const std::filesystem::path& path) {
    std::string out = "family,p1,p2,log_likelihood,n_samples\n";
    for (const auto& m : fits) {
        out += std::string(family_name(m.family)) + "," + fmt_double(m.p1) + "," +
               fmt_double(m.p2) + "," + fmt_double(m.log_likelihood) + "," +
               std::to_string(m.n_samples) + "\n";
    }
    write_file(path, out);
}

std::vector<FittedModel> read_fits_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(f, line) || line != "family,p1,p2,log_likelihood,n_samples") {
        throw IoError(path.string() + ": unexpected fits header");
    }
    std::vector<FittedModel> fits;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string family, p1, p2, ll, n;
        if (!std::getline(ss, family, ',') || !std::getline(ss, p1, ',') ||
            !std::getline(ss, p2, ',') || !std::getline(ss, ll, ',') || !std::getline(ss, n)) {
            throw IoError(path.string() + ": malformed fits row");
        }
        FittedModel m;
        bool known = false;
        for (DistFamily fam : {DistFamily::Weibull, DistFamily::LogNormal,
                               DistFamily::InverseGaussian, DistFamily::Gamma,
                               DistFamily::Rayleigh}) {
            if (family == family_name(fam)) {
                m.family = fam;
                known = true;
            }
        }
        if (!known) throw IoError(path.string() + ": unknown family " + family);
        m.p1 = std::stod(p1);
        m.p2 = p2.empty() ? 0.0 : std::stod(p2);
        m.log_likelihood = std::stod(ll);
        m.n_samples = static_cast<std::size_t>(std::stoull(n));
        fits.push_back(m);
    }
    return fits;
}

std::uint64_t fnv1a_bytes(const void* data, std::size_t size, std::uint64_t seed) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    const std::string bytes = ss.str();
    return fnv1a_bytes(bytes.data(), bytes.size());
}

} // namespace sar
