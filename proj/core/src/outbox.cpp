#include "golib/outbox.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "golib/errors.hpp"

namespace golib {

namespace {

nlohmann::json to_line(const MailMessage& m) {
    return {{"to", m.to}, {"subject", m.subject}, {"body", m.body}, {"timestamp", format_rfc3339(m.timestamp)}};
}

}  // namespace

Outbox::Outbox(std::optional<std::filesystem::path> path) : path_(std::move(path)) {
    if (!path_) return;
    std::ifstream in(*path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            const auto doc = nlohmann::json::parse(line);
            messages_.push_back({doc.at("to").get<std::string>(), doc.at("subject").get<std::string>(),
                                 doc.at("body").get<std::string>(),
                                 parse_rfc3339(doc.at("timestamp").get<std::string>())});
        } catch (const std::exception&) {
            // A torn final line from an earlier crash is not fatal for mail.
        }
    }
}

void Outbox::append(MailMessage message) {
    std::lock_guard lock(mu_);
    if (path_) {
        std::ofstream out(*path_, std::ios::app);
        out << to_line(message).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
        if (!out) throw Error(ErrorCode::StorageFailure, "cannot append to outbox " + path_->string());
    }
    messages_.push_back(std::move(message));
}

std::vector<MailMessage> Outbox::messages() const {
    std::lock_guard lock(mu_);
    return messages_;
}

std::vector<MailMessage> Outbox::messages_to(const std::string& recipient) const {
    std::lock_guard lock(mu_);
    std::vector<MailMessage> out;
    for (const auto& m : messages_) {
        if (m.to == recipient) out.push_back(m);
    }
    return out;
}

std::size_t Outbox::size() const {
    std::lock_guard lock(mu_);
    return messages_.size();
}

}  // namespace golib
