#pragma once

#include <string>
#include <vector>

#include "capnet/util.hpp"

namespace capnet {

/// Plain-text report: one `key value...` or `PASS/FAIL name residual` line
/// per entry, floats at 12 significant digits. Line order is insertion
/// order, so identical inputs yield byte-identical reports.
class Report {
  public:
    void kv(const std::string& key, const std::string& value) {
        lines_.push_back(key + " " + value);
    }
    void kv(const std::string& key, double value) { kv(key, fmt_g12(value)); }
    void kv(const std::string& key, long long value) { kv(key, std::to_string(value)); }
    void raw(const std::string& line) { lines_.push_back(line); }
    void check(const std::string& name, bool pass, double residual) {
        lines_.push_back(std::string(pass ? "PASS" : "FAIL") + " " + name + " " +
                         fmt_g12(residual));
        all_pass_ = all_pass_ && pass;
    }

    bool all_pass() const { return all_pass_; }
    const std::vector<std::string>& lines() const { return lines_; }
    std::string str() const {
        std::string out;
        for (const auto& l : lines_) {
            out += l;
            out += '\n';
        }
        return out;
    }

  private:
    std::vector<std::string> lines_;
    bool all_pass_ = true;
};

}  // namespace capnet
