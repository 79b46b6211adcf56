// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "ember/common.h"

namespace ember {

// All on-disk numeric data is little-endian: 32-bit floats for parameters and
// optimizer state, 32-bit unsigned ids for edges, 64-bit unsigned offsets.
static_assert(sizeof(float) == 4);

template <typename T>
void write_pod_file(const std::filesystem::path& path, std::span<const T> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for write: " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size_bytes()));
    if (!out) throw IoError("write failed: " + path.string());
}

template <typename T>
std::vector<T> read_pod_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IoError("cannot open for read: " + path.string());
    auto bytes = static_cast<std::uint64_t>(in.tellg());
    if (bytes % sizeof(T) != 0) {
        throw IoError("file size " + std::to_string(bytes) + " not a multiple of element size: " + path.string());
    }
    std::vector<T> data(bytes / sizeof(T));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw IoError("read failed: " + path.string());
    return data;
}

// Reads exactly `count` elements; errors on short or oversized files.
template <typename T>
void read_pod_file_exact(const std::filesystem::path& path, std::span<T> out) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IoError("cannot open for read: " + path.string());
    auto bytes = static_cast<std::uint64_t>(in.tellg());
    if (bytes != out.size_bytes()) {
        throw IoError("file " + path.string() + " has " + std::to_string(bytes) + " bytes, expected " +
                      std::to_string(out.size_bytes()));
    }
    in.seekg(0);
    in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size_bytes()));
    if (!in) throw IoError("read failed: " + path.string());
}

}  // namespace ember
