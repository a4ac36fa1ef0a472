#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "golib/time.hpp"

namespace golib {

struct MailMessage {
    std::string to;
    std::string subject;
    std::string body;
    Timestamp timestamp;
};

/// Append-only stand-in for outbound mail. With a path, every message is also
/// appended to that file as one JSON object per line
/// (`{"body","subject","timestamp","to"}`).
class Outbox {
public:
    explicit Outbox(std::optional<std::filesystem::path> path = std::nullopt);

    void append(MailMessage message);
    std::vector<MailMessage> messages() const;
    std::vector<MailMessage> messages_to(const std::string& recipient) const;
    std::size_t size() const;

private:
    std::optional<std::filesystem::path> path_;
    mutable std::mutex mu_;
    std::vector<MailMessage> messages_;
};

}  // namespace golib
