// Runs the acceptance criteria and prints one line per criterion.
// Usage: acceptance [--verbose] [id ...]

#include <iostream>

#include "suites.hpp"

int main(int argc, char** argv) {
    using namespace qsym;
    bool verbose = false;
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--verbose" || a == "-v") {
            verbose = true;
            continue;
        }
        try {
            wanted.insert(std::stoi(a));
        } catch (const std::exception&) {
            std::cerr << "unknown argument '" << a << "'\n";
            return 2;
        }
    }
    int failures = 0;
    for (const auto& c : suites::criteria()) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        auto t0 = std::chrono::steady_clock::now();
        VerificationReport r;
        std::string error;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = error.empty() && !r.failed();
        std::size_t findings = 0;
        for (const auto& ch : r.checks) findings += ch.verdict == Verdict::finding;
        std::cout << "criterion " << c.id << ": " << (ok ? "PASS" : "FAIL") << "  " << c.title << "  (" << r.checks.size() << " checks";
        if (findings) std::cout << ", " << findings << " findings";
        std::cout << ", " << static_cast<int>(secs * 1000) << " ms)\n";
        if (!error.empty()) std::cout << "  error: " << error << "\n";
        for (const auto& ch : r.checks)
            if (verbose || ch.verdict != Verdict::pass)
                std::cout << "  [" << verdict_name(ch.verdict) << "] " << ch.id << (ch.detail.empty() ? "" : ": " + ch.detail) << "\n";
        failures += !ok;
    }
    std::cout.flush();
    return failures ? 1 : 0;
}
