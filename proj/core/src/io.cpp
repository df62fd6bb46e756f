#include "iwbl/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace iwbl {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key");
        cfg.kv_[key] = val;
    }
    return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
    kv_[trim(key)] = trim(value);
}

std::string Config::get_str(const std::string& key,
                            const std::string& def) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? def : it->second;
}

std::string Config::require_str(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end())
        throw ConfigError("missing required config key: " + key);
    return it->second;
}

double Config::get_double(const std::string& key, double def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": cannot parse '" +
                          it->second + "' as a real number");
    }
}

int Config::get_int(const std::string& key, int def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
        size_t pos = 0;
        int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": cannot parse '" +
                          it->second + "' as an integer");
    }
}

bool Config::get_bool(const std::string& key, bool def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config key " + key + ": cannot parse '" + it->second +
                      "' as a boolean");
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    std::vector<double> out;
    std::string body = trim(it->second);
    if (body.size() >= 2 && body.front() == '[' && body.back() == ']')
        body = body.substr(1, body.size() - 2);
    std::istringstream in(body);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": cannot parse '" + tok +
                              "' in list");
        }
    }
    if (out.empty())
        throw ConfigError("config key " + key + ": empty list");
    return out;
}

std::string Config::dump() const {
    std::string out;
    for (const auto& [k, v] : kv_) out += k + " = " + v + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// snapshots

namespace {

constexpr char kMagic[8] = {'I', 'W', 'B', 'L', 'S', 'N', 'A', 'P'};
constexpr uint32_t kVersion = 1;
constexpr uint32_t kEndianTag = 0x01020304u;
constexpr uint32_t kKindBulk = 1, kKindBL = 2;

struct Writer {
    std::ofstream out;
    explicit Writer(const std::string& path)
        : out(path, std::ios::binary | std::ios::trunc) {
        if (!out) throw IoError("cannot open snapshot for writing: " + path);
    }
    template <typename T>
    void put(const T& v) {
        out.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }
    void put_matrix(const Eigen::MatrixXcd& m) {
        out.write(reinterpret_cast<const char*>(m.data()),
                  static_cast<std::streamsize>(sizeof(cplx) * m.size()));
    }
};

struct Reader {
    std::ifstream in;
    std::string path;
    explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
        if (!in) throw IoError("cannot open snapshot: " + p);
    }
    template <typename T>
    T get(const char* field) {
        T v;
        in.read(reinterpret_cast<char*>(&v), sizeof(T));
        if (!in)
            throw IoError("snapshot " + path + ": truncated reading " + field);
        return v;
    }
    void get_matrix(Eigen::MatrixXcd& m, const char* field) {
        in.read(reinterpret_cast<char*>(m.data()),
                static_cast<std::streamsize>(sizeof(cplx) * m.size()));
        if (!in)
            throw IoError("snapshot " + path + ": truncated reading " + field);
    }
};

void put_header(Writer& w, uint32_t kind, const GridSpec& g, double time) {
    w.out.write(kMagic, sizeof(kMagic));
    w.put(kVersion);
    w.put(kEndianTag);
    w.put(kind);
    w.put(int32_t(g.Nx));
    w.put(int32_t(g.Ny));
    w.put(int32_t(g.Nz));
    w.put(int32_t(g.Neta));
    w.put(g.L_eta);
    w.put(g.dealias_fraction);
    w.put(time);
}

struct Header {
    GridSpec grid;
    double time;
};

Header get_header(Reader& r, uint32_t want_kind) {
    char magic[8];
    r.in.read(magic, sizeof(magic));
    if (!r.in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError("snapshot " + r.path + ": bad magic (not a snapshot)");
    if (auto v = r.get<uint32_t>("version"); v != kVersion)
        throw IoError("snapshot " + r.path + ": unsupported version " +
                      std::to_string(v));
    if (r.get<uint32_t>("endianness") != kEndianTag)
        throw IoError("snapshot " + r.path + ": foreign endianness");
    uint32_t kind = r.get<uint32_t>("kind");
    if (kind != want_kind)
        throw IoError("snapshot " + r.path + ": mismatched field kind (got " +
                      std::to_string(kind) + ", want " +
                      std::to_string(want_kind) + ")");
    Header h;
    h.grid.Nx = r.get<int32_t>("Nx");
    h.grid.Ny = r.get<int32_t>("Ny");
    h.grid.Nz = r.get<int32_t>("Nz");
    h.grid.Neta = r.get<int32_t>("Neta");
    h.grid.L_eta = r.get<double>("L_eta");
    h.grid.dealias_fraction = r.get<double>("dealias_fraction");
    h.time = r.get<double>("time");
    return h;
}

}  // namespace

void save_snapshot(const BulkState& s, const std::string& path) {
    Writer w(path);
    put_header(w, kKindBulk, s.grid, s.time);
    w.put_matrix(s.vx);
    w.put_matrix(s.vy);
    w.put_matrix(s.w);
    w.put_matrix(s.theta);
    if (!w.out) throw IoError("short write to snapshot: " + path);
}

void save_snapshot(const BLState& s, const std::string& path) {
    Writer w(path);
    put_header(w, kKindBL, s.grid, s.time);
    w.put_matrix(s.vx);
    w.put_matrix(s.vy);
    w.put_matrix(s.theta);
    if (!w.out) throw IoError("short write to snapshot: " + path);
}

BulkState load_bulk_snapshot(const std::string& path) {
    Reader r(path);
    Header h = get_header(r, kKindBulk);
    h.grid.validate();
    BulkState s(h.grid);
    s.time = h.time;
    r.get_matrix(s.vx, "vx");
    r.get_matrix(s.vy, "vy");
    r.get_matrix(s.w, "w");
    r.get_matrix(s.theta, "theta");
    return s;
}

BLState load_bl_snapshot(const std::string& path) {
    Reader r(path);
    Header h = get_header(r, kKindBL);
    h.grid.validate();
    BLState s(h.grid);
    s.time = h.time;
    r.get_matrix(s.vx, "vx");
    r.get_matrix(s.vy, "vy");
    r.get_matrix(s.theta, "theta");
    return s;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : path_(path), columns_(columns) {
    for (size_t i = 0; i < columns_.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += columns_[i];
    }
    buf_ += '\n';
}

CsvWriter::~CsvWriter() {
    try {
        close();
    } catch (...) {
        // destructor must not throw; close() explicitly to observe errors
    }
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
        throw ConfigError("CsvWriter: row width does not match header");
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += format_double(values[i]);
    }
    buf_ += '\n';
}

void CsvWriter::close() {
    if (!open_) return;
    open_ = false;
    write_text_file(path_, buf_);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw IoError("short write: " + path);
}

}  // namespace iwbl
