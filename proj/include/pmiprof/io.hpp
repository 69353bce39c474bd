#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pmiprof/distributions.hpp"

namespace pmiprof {

// Shortest round-trip formatting (to_chars); "inf"/"-inf"/"nan" spelled out.
std::string format_double(double v);

// Header "x1..xm,y1..yn"; SpecError on malformed files.
PairedSample read_sample_csv(const std::string& path);
void write_sample_csv(const std::string& path, const PairedSample& sample);

void write_vector_csv(const std::string& path, const std::string& column, const Vector& values);

// One row per line, each row already formatted.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::uint64_t fnv1a64_file(const std::string& path);

// Provenance sidecar (<first output>.manifest.json): command line, seed,
// version, FNV-1a64 digest per output file.
void write_manifest(const std::string& command_line, Seed seed,
                    const std::vector<std::string>& output_files);

}  // namespace pmiprof
