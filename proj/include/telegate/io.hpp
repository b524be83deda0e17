#pragma once

// CSV plumbing shared by the command-line tools: run-manifest headers and
// the start:stop:step grid syntax.

#include <chrono>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace telegate {

inline constexpr const char* kVersion = "1.0.0";

// Provenance block written as '#'-prefixed comment lines at the top of every
// CSV so a result file is reproducible from its own header.
struct RunManifest {
    std::string subcommand;
    std::string flags;
    std::uint64_t master_seed = 0;
    std::string version = kVersion;
    double duration_seconds = 0.0;

    void write(std::ostream& os) const {
        os << "# subcommand: " << subcommand << "\n";
        os << "# flags: " << flags << "\n";
        os << "# master_seed: " << master_seed << "\n";
        os << "# version: " << version << "\n";
        os << "# duration_seconds: " << duration_seconds << "\n";
    }
};

// Parses "start:stop:step" into an inclusive grid; stop is included when it
// lies within half a step of a grid point.
inline std::vector<double> parse_grid(const std::string& text) {
    std::istringstream is(text);
    std::string part;
    std::vector<double> fields;
    while (std::getline(is, part, ':')) fields.push_back(std::stod(part));
    if (fields.size() != 3)
        throw std::invalid_argument("grid must have the form start:stop:step");
    double start = fields[0], stop = fields[1], step = fields[2];
    if (step <= 0.0) throw std::invalid_argument("grid step must be > 0");
    if (stop < start) throw std::invalid_argument("grid stop must be >= start");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        double v = start + i * step;
        if (v > stop + 0.5 * step) break;
        grid.push_back(v < stop ? v : stop);
        if (grid.size() > 1000000) throw std::invalid_argument("grid has too many points");
    }
    return grid;
}

inline std::vector<long long> parse_grid_int(const std::string& text) {
    std::vector<long long> grid;
    for (double v : parse_grid(text)) grid.push_back(static_cast<long long>(std::llround(v)));
    return grid;
}

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace telegate
