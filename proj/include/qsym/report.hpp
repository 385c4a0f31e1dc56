#pragma once

#include <string>
#include <vector>

#include "qsym/json_io.hpp"

namespace qsym {

/// "finding" records a documented discrepancy in a displayed formula and never fails a run alone.
enum class Verdict { pass, fail, finding };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::finding: return "finding";
    }
    return "?";
}

struct CheckResult {
    std::string id;
    std::string location;
    Verdict verdict = Verdict::pass;
    std::string detail;
};

struct VerificationReport {
    std::string suite;
    std::vector<CheckResult> checks;

    void add(std::string id, std::string location, bool ok, std::string detail) {
        checks.push_back({std::move(id), std::move(location), ok ? Verdict::pass : Verdict::fail, std::move(detail)});
    }
    void finding(std::string id, std::string location, std::string detail) {
        checks.push_back({std::move(id), std::move(location), Verdict::finding, std::move(detail)});
    }
    void append(const VerificationReport& o) { checks.insert(checks.end(), o.checks.begin(), o.checks.end()); }

    bool failed() const {
        for (const auto& c : checks)
            if (c.verdict == Verdict::fail) return true;
        return false;
    }
    int exit_code() const { return failed() ? 1 : 0; }

    std::string text() const {
        std::string s = "suite " + suite + "\n";
        for (const auto& c : checks) {
            s += "  [" + std::string(verdict_name(c.verdict)) + "] " + c.id + " (" + c.location + ")";
            if (!c.detail.empty()) s += ": " + c.detail;
            s += "\n";
        }
        s += failed() ? "result: FAIL\n" : "result: PASS\n";
        return s;
    }

    json_io::json to_json() const {
        json_io::json arr = json_io::json::array();
        for (const auto& c : checks)
            arr.push_back({{"id", c.id}, {"location", c.location}, {"verdict", verdict_name(c.verdict)}, {"detail", c.detail}});
        return {{"suite", suite}, {"checks", arr}, {"status", failed() ? "fail" : "pass"}};
    }
};

}  // namespace qsym
