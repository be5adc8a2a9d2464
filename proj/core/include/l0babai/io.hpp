#pragma once

#include "l0babai/matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace l0babai {

/// Full-precision decimal of a double (17 significant digits, round-trip safe).
std::string format_full(double v);

/// Fixed 4-decimal rendering for terminal tables.
std::string format_table(double v);

/// Headerless CSV, one matrix row per line, 17 significant digits.
std::string matrix_to_csv(const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);

/// CSV with a header row.
std::string table_to_csv(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// SHA-1 of a byte string, lowercase hex.
std::string sha1_hex(const std::string& bytes);

/// Git-style content hash: SHA-1 of "blob <size>\0<content>".
std::string git_blob_hash(const std::string& content);

/// Minimal JSON emitter for manifests and CLI output.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v);
    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(std::uint64_t v);
    JsonWriter& value(int v);
    JsonWriter& value(bool v);
    JsonWriter& value_null();

    std::string str() const { return out_; }

private:
    void separate();
    std::string out_;
    std::vector<bool> needs_comma_;
    bool pending_key_ = false;
};

std::string json_escape(const std::string& s);

} // namespace l0babai
