/// @file io.hpp
/// @brief Reproducibility plumbing: flat key=value run configuration with
///        --set overrides, self-describing binary state snapshots with exact
///        round-trip, and deterministic CSV emission.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "iwbl/bl.hpp"
#include "iwbl/bulk.hpp"
#include "iwbl/errors.hpp"

namespace iwbl {

/// Flat configuration: `section.key = value` lines, '#' comments.  Values
/// are kept as strings; typed accessors parse on demand.
class Config {
  public:
    static Config load(const std::string& path);       // IoError on open/read
    static Config parse(const std::string& text);      // ConfigError on syntax

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get_str(const std::string& key, const std::string& def) const;
    std::string require_str(const std::string& key) const;
    double get_double(const std::string& key, double def) const;
    int get_int(const std::string& key, int def) const;
    bool get_bool(const std::string& key, bool def) const;
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& def) const;

    /// Sorted `key = value` lines (the resolved-config part of a manifest).
    std::string dump() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

/// Binary snapshots ("IWBLSNAP" container: version, endianness tag, kind,
/// grid header, time, raw complex arrays).  Loads refuse files whose grid
/// differs from the expectation, naming the mismatched field.
void save_snapshot(const BulkState& s, const std::string& path);
void save_snapshot(const BLState& s, const std::string& path);
BulkState load_bulk_snapshot(const std::string& path);
BLState load_bl_snapshot(const std::string& path);

/// Deterministic CSV writer: fixed column set, shortest round-trip float
/// formatting, no locale or wall-clock dependence.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    void row(const std::vector<double>& values);  // must match column count
    void close();

  private:
    std::string path_;
    std::vector<std::string> columns_;
    std::string buf_;
    bool open_ = true;
};

/// Shortest round-trip decimal rendering of a double (used by every text
/// artifact so identical configs give byte-identical outputs).
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace iwbl
