#pragma once

#include "tensorcalc/algebra.hpp"
#include "tensorcalc/ode.hpp"
#include "tensorcalc/tensor.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tensorcalc {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// tensor JSON format: {"shape": [d1, ..., dk], "data": [row-major scalars]}
// ---------------------------------------------------------------------------

inline json tensor_to_json(const DenseTensor& t) {
    json j;
    j["shape"] = t.shape();
    j["data"] = t.values();
    return j;
}

inline DenseTensor tensor_from_json(const json& j, const std::string& path = "$") {
    if (!j.is_object()) throw std::runtime_error(path + ": expected a tensor object");
    if (!j.contains("shape") || !j["shape"].is_array()) {
        throw std::runtime_error(path + ".shape: expected an array of dimensions");
    }
    if (!j.contains("data") || !j["data"].is_array()) {
        throw std::runtime_error(path + ".data: expected an array of scalars");
    }
    Shape shape;
    for (const auto& d : j["shape"]) {
        if (!d.is_number_unsigned() || d.get<std::uint64_t>() == 0) {
            throw std::runtime_error(path + ".shape: dimensions must be positive integers");
        }
        shape.push_back(d.get<std::size_t>());
    }
    std::vector<double> data;
    for (const auto& v : j["data"]) {
        if (!v.is_number()) throw std::runtime_error(path + ".data: entries must be numbers");
        data.push_back(v.get<double>());
    }
    try {
        return DenseTensor(shape, std::move(data));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline json load_json_file(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error(filename + ": cannot open");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(filename + ": " + e.what());
    }
}

inline DenseTensor load_tensor_json(const std::string& filename) {
    return tensor_from_json(load_json_file(filename), filename);
}

inline void save_json_file(const std::string& filename, const json& j) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error(filename + ": cannot open for writing");
    out << j.dump(2) << "\n";
}

inline void save_tensor_json(const std::string& filename, const DenseTensor& t) {
    save_json_file(filename, tensor_to_json(t));
}

// ---------------------------------------------------------------------------
// tensor binary format: magic "TNSR", u32 order, u64 dims, f64 data, all LE
// ---------------------------------------------------------------------------

namespace detail {

template <class T>
void write_le(std::ostream& out, T value) {
    unsigned char bytes[sizeof(T)];
    std::uint64_t bits;
    if constexpr (sizeof(T) == 4) {
        std::uint32_t b;
        std::memcpy(&b, &value, 4);
        bits = b;
    } else {
        std::memcpy(&bits, &value, 8);
    }
    for (std::size_t k = 0; k < sizeof(T); ++k) bytes[k] = static_cast<unsigned char>(bits >> (8 * k));
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T read_le(std::istream& in) {
    unsigned char bytes[sizeof(T)];
    in.read(reinterpret_cast<char*>(bytes), sizeof(T));
    if (!in) throw std::runtime_error("tensor binary: truncated stream");
    std::uint64_t bits = 0;
    for (std::size_t k = sizeof(T); k-- > 0;) bits = (bits << 8) | bytes[k];
    T value;
    if constexpr (sizeof(T) == 4) {
        const std::uint32_t b = static_cast<std::uint32_t>(bits);
        std::memcpy(&value, &b, 4);
    } else {
        std::memcpy(&value, &bits, 8);
    }
    return value;
}

} // namespace detail

inline void write_tensor_binary(std::ostream& out, const DenseTensor& t) {
    out.write("TNSR", 4);
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.order()));
    for (std::size_t d : t.shape()) detail::write_le<std::uint64_t>(out, d);
    for (double v : t.values()) detail::write_le<double>(out, v);
}

inline DenseTensor read_tensor_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != "TNSR") {
        throw std::runtime_error("tensor binary: bad magic, expected TNSR");
    }
    const std::uint32_t order = detail::read_le<std::uint32_t>(in);
    if (order == 0 || order > 64) throw std::runtime_error("tensor binary: implausible order");
    Shape shape;
    for (std::uint32_t k = 0; k < order; ++k) {
        shape.push_back(static_cast<std::size_t>(detail::read_le<std::uint64_t>(in)));
    }
    DenseTensor t(shape);
    for (double& v : t.values()) v = detail::read_le<double>(in);
    return t;
}

inline void save_tensor_binary(const std::string& filename, const DenseTensor& t) {
    std::ofstream out(filename, std::ios::binary);
    if (!out) throw std::runtime_error(filename + ": cannot open for writing");
    write_tensor_binary(out, t);
}

inline DenseTensor load_tensor_binary(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) throw std::runtime_error(filename + ": cannot open");
    return read_tensor_binary(in);
}

// ---------------------------------------------------------------------------
// trajectory CSV: header "s,x11,x21,...", one row per grid point
// ---------------------------------------------------------------------------

inline std::string trajectory_csv(const Trajectory& traj) {
    if (traj.states.empty()) throw std::invalid_argument("trajectory_csv: empty trajectory");
    const Shape& shape = traj.states.front().shape();
    const std::size_t rows = shape[0];
    const std::size_t cols = (shape.size() > 1) ? shape[1] : 1;

    std::ostringstream out;
    out << "s";
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) out << ",x" << (i + 1) << (j + 1);
    }
    out << "\n";
    char buf[32];
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g", traj.times[k]);
        out << buf;
        const DenseTensor v = vectorize_state(traj.states[k]);
        for (double x : v.values()) {
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            out << "," << buf;
        }
        out << "\n";
    }
    return out.str();
}

inline void save_trajectory_csv(const std::string& filename, const Trajectory& traj) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error(filename + ": cannot open for writing");
    out << trajectory_csv(traj);
}

} // namespace tensorcalc
