#pragma once

#include "afc/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace afc {

struct ResultValue {
    std::string key;
    double value = 0.0;
};

struct Artifact {
    std::string filename;
    std::string content;
};

struct RunOutput {
    std::vector<ResultValue> results;
    Validity validity;
    std::vector<Artifact> files; // CSV documents, written next to report.txt

    // NaN when absent.
    double value(const std::string& key) const;
};

// Runs a validated configuration entirely in memory. Module errors propagate
// (DomainError, NumericalError); nothing touches the file system.
RunOutput execute(const RunConfig& cfg);

// Echoed configuration followed by a [results] section.
std::string report_text(const RunConfig& cfg, const RunOutput& out);

// Writes report.txt and every artifact into `dir`, creating it if needed.
// Each file is written to a temporary name and renamed; on failure the files
// written so far are removed and IoError is thrown.
void write_outputs(const std::filesystem::path& dir, const RunConfig& cfg, const RunOutput& out);

} // namespace afc
