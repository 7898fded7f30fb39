#include "texcat/pgm.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace texcat {
namespace {

// Skips whitespace and '#' comments, returns the next integer token.
// pos is advanced past the token.
long next_int(const std::string& bytes, size_t& pos, const char* what) {
    while (pos < bytes.size()) {
        unsigned char c = bytes[pos];
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(c)) {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
        throw PgmError(std::string("expected ") + what, pos);
    long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        v = v * 10 + (bytes[pos] - '0');
        if (v > 1'000'000'000) throw PgmError(std::string("oversized ") + what, pos);
        ++pos;
    }
    return v;
}

}  // namespace

GrayImage decode_pgm(const std::string& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
        throw PgmError("not a P2/P5 PGM", 0);
    bool binary = bytes[1] == '5';
    size_t pos = 2;

    long width = next_int(bytes, pos, "width");
    long height = next_int(bytes, pos, "height");
    long maxval = next_int(bytes, pos, "maxval");
    if (width <= 0 || height <= 0) throw PgmError("non-positive dimensions", pos);
    if (maxval <= 0 || maxval > 65535) throw PgmError("maxval out of range [1, 65535]", pos);

    GrayImage img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.levels = static_cast<int>(maxval) + 1;
    size_t n = static_cast<size_t>(width) * height;
    img.pixels.reserve(n);

    if (binary) {
        if (pos >= bytes.size()) throw PgmError("truncated payload", pos);
        ++pos;  // single whitespace after maxval
        int bpp = maxval > 255 ? 2 : 1;
        if (bytes.size() - pos < n * bpp)
            throw PgmError("truncated payload", bytes.size());
        for (size_t i = 0; i < n; ++i) {
            int v;
            if (bpp == 1) {
                v = static_cast<unsigned char>(bytes[pos + i]);
            } else {
                v = (static_cast<unsigned char>(bytes[pos + 2 * i]) << 8) |
                    static_cast<unsigned char>(bytes[pos + 2 * i + 1]);
            }
            if (v > maxval) throw PgmError("sample exceeds maxval", pos + i * bpp);
            img.pixels.push_back(v);
        }
    } else {
        for (size_t i = 0; i < n; ++i) {
            long v;
            try {
                v = next_int(bytes, pos, "sample");
            } catch (const PgmError&) {
                throw PgmError("truncated payload", pos);
            }
            if (v > maxval) throw PgmError("sample exceeds maxval", pos);
            img.pixels.push_back(static_cast<int>(v));
        }
    }
    return img;
}

std::string encode_pgm(const GrayImage& img, bool binary) {
    int maxval = img.levels - 1;
    std::ostringstream out;
    if (binary && maxval <= 255) {
        out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
        for (int v : img.pixels) out.put(static_cast<char>(v));
    } else {
        out << "P2\n" << img.width << " " << img.height << "\n" << maxval << "\n";
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                if (x) out << ' ';
                out << img.at(x, y);
            }
            out << '\n';
        }
    }
    return out.str();
}

GrayImage load_pgm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_pgm(buf.str());
}

void save_pgm_file(const GrayImage& img, const std::string& path, bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << encode_pgm(img, binary);
}

}  // namespace texcat
