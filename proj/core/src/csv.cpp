#include "giant_heom/csv.hpp"

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace giant_heom::csv {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

Writer::Writer(std::ostream& out, const std::vector<std::string>& header) : out_(&out), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) *out_ << ',';
        *out_ << header[i];
    }
    *out_ << '\n';
}

void Writer::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::logic_error("csv::Writer: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) *out_ << ',';
        *out_ << format_double(values[i]);
    }
    *out_ << '\n';
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path target{path};
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace giant_heom::csv
