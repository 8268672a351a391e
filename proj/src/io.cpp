#include "revguard/io.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <array>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "revguard/errors.hpp"

namespace revguard::io {

namespace fs = std::filesystem;

namespace {

std::string read_gzip(const fs::path& path) {
    gzFile gz = gzopen(path.string().c_str(), "rb");
    if (gz == nullptr) {
        throw ConfigError("cannot open " + path.string());
    }
    std::string out;
    std::array<char, 1 << 16> buf{};
    for (;;) {
        int n = gzread(gz, buf.data(), static_cast<unsigned>(buf.size()));
        if (n < 0) {
            int err = 0;
            std::string msg = gzerror(gz, &err);
            gzclose(gz);
            throw ParseError("gzip read failed for " + path.string() + ": " + msg);
        }
        if (n == 0) break;
        out.append(buf.data(), static_cast<std::size_t>(n));
    }
    gzclose(gz);
    return out;
}

}  // namespace

std::string read_file(const fs::path& path) {
    if (path.extension() == ".gz") {
        return read_gzip(path);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path resolve_maybe_gz(const fs::path& path) {
    if (fs::exists(path)) return path;
    fs::path gz = path;
    gz += ".gz";
    if (fs::exists(gz)) return gz;
    throw ConfigError("missing file: " + path.string() + "[.gz]");
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    static std::atomic<unsigned long> counter{0};
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "." +
           std::to_string(counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ConfigError("cannot write " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw ConfigError("short write to " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[md[i] >> 4]);
        out.push_back(kHex[md[i] & 0x0F]);
    }
    return out;
}

}  // namespace revguard::io
