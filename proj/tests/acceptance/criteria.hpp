#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace golib::acceptance {

/// Collects the outcome of one criterion. A criterion passes when nothing
/// was recorded as a failure and it ran to completion.
class Verdict {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (ok) return;
        ++failed_;
        if (failures_.size() < 10) failures_.push_back(what);
    }
    void note(std::string summary) { summary_ = std::move(summary); }

    bool passed() const { return failed_ == 0; }
    std::size_t checks() const { return checks_; }
    std::size_t failed() const { return failed_; }
    const std::vector<std::string>& failures() const { return failures_; }
    const std::string& summary() const { return summary_; }

private:
    std::size_t checks_ = 0;
    std::size_t failed_ = 0;
    std::vector<std::string> failures_;
    std::string summary_;
};

struct Criterion {
    std::string name;
    std::function<void(Verdict&)> run;
};

std::vector<Criterion> booking_criteria();
std::vector<Criterion> account_criteria();
std::vector<Criterion> search_criteria();
std::vector<Criterion> platform_criteria();

}  // namespace golib::acceptance
