#pragma once

// Diagnostics CSV and binary checkpoints.
//
// Checkpoint layout (all little-endian):
//   "CHFL" | u16 version | u32 d | u32 N | f64 L | f64 t | n | c | u_0 .. u_{d-1}
// each field N^d float64 values in row-major order.

#include <bit>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chemoflow/error.hpp"
#include "chemoflow/integrator.hpp"
#include "chemoflow/model.hpp"

namespace chemoflow {

inline constexpr std::uint16_t kCheckpointVersion = 1;

inline void require_little_endian() {
    if constexpr (std::endian::native != std::endian::little)
        throw IoError("big-endian hosts are not supported by the checkpoint format");
}

namespace detail {

inline std::ofstream open_for_write(const std::string& path, std::ios::openmode mode = std::ios::out) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
        if (ec) throw IoError("cannot create directory '" + parent.string() + "': " + ec.message());
    }
    std::ofstream out(path, mode);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in, const std::string& path) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (in.gcount() != static_cast<std::streamsize>(sizeof v)) throw IoError("checkpoint '" + path + "' is truncated");
    return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CSV

inline void write_diagnostics_csv(std::ostream& out, const DiagnosticsSchema& schema,
                                  const std::vector<DiagnosticsRow>& rows) {
    const auto cols = schema.column_names();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : rows) {
        const auto v = r.values();
        if (v.size() != cols.size()) throw Error("diagnostics row does not match the schema");
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << detail::format_g17(v[i]);
        out << '\n';
    }
}

inline void write_diagnostics_csv(const std::string& path, const DiagnosticsSchema& schema,
                                  const std::vector<DiagnosticsRow>& rows) {
    auto out = detail::open_for_write(path);
    write_diagnostics_csv(out, schema, rows);
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline void write_diagnostics_csv(const std::string& path, const Trajectory& traj) {
    write_diagnostics_csv(path, traj.schema, traj.rows);
}

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        std::string known;
        for (const auto& c : columns) known += (known.empty() ? "" : ", ") + c;
        throw ConfigError("no column '" + name + "' (available: " + known + ")");
    }
    [[nodiscard]] std::vector<double> column(const std::string& name) const {
        const auto j = column_index(name);
        std::vector<double> out;
        for (const auto& r : rows) out.push_back(r[j]);
        return out;
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw IoError("'" + path + "' is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            errno = 0;
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0' || errno == ERANGE)
                throw IoError(path + ":" + std::to_string(lineno) + ": cannot parse '" + cell + "'");
            row.push_back(v);
        }
        if (row.size() != table.columns.size())
            throw IoError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(table.columns.size()) +
                          " fields, got " + std::to_string(row.size()));
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Checkpoints

inline void write_checkpoint(const std::string& path, const State& s) {
    require_little_endian();
    const Grid& g = *s.grid();
    auto out = detail::open_for_write(path, std::ios::binary);
    out.write("CHFL", 4);
    detail::put<std::uint16_t>(out, kCheckpointVersion);
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim));
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(g.points));
    detail::put<double>(out, g.length);
    detail::put<double>(out, s.t);
    auto field = [&](const RealField& f) {
        out.write(reinterpret_cast<const char*>(f.values.data()),
                  static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    };
    field(s.n);
    field(s.c);
    for (const auto& comp : s.u.components) field(comp);
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline State read_checkpoint(const std::string& path) {
    require_little_endian();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, "CHFL", 4) != 0) throw IoError("'" + path + "' is not a checkpoint");
    const auto version = detail::get<std::uint16_t>(in, path);
    if (version != kCheckpointVersion)
        throw IoError("checkpoint '" + path + "' has unsupported version " + std::to_string(version));
    const auto d = detail::get<std::uint32_t>(in, path);
    const auto N = detail::get<std::uint32_t>(in, path);
    const auto L = detail::get<double>(in, path);
    const auto t = detail::get<double>(in, path);
    GridPtr g;
    try {
        g = make_grid(static_cast<int>(d), static_cast<int>(N), L);
    } catch (const ConfigError& e) {
        throw IoError("checkpoint '" + path + "' has an invalid grid: " + e.what());
    }
    State s = make_rest_state(g);
    s.t = t;
    auto field = [&](RealField& f) {
        const auto bytes = static_cast<std::streamsize>(f.values.size() * sizeof(double));
        in.read(reinterpret_cast<char*>(f.values.data()), bytes);
        if (in.gcount() != bytes) throw IoError("checkpoint '" + path + "' is truncated");
    };
    field(s.n);
    field(s.c);
    for (auto& comp : s.u.components) field(comp);
    if (in.peek() != std::char_traits<char>::eof()) throw IoError("checkpoint '" + path + "' has trailing bytes");
    return s;
}

}  // namespace chemoflow
