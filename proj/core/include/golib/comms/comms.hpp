#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "golib/schema.hpp"
#include "golib/services.hpp"

namespace golib::comms {

/// Deterministic id, so one (recipient, kind, subject) can only ever yield
/// one notification no matter how often fan-out is retried.
std::string notification_id(const std::string& recipient_id, NotificationKind kind, const std::string& subject_id);

/// Transaction-scoped building blocks. They run inside the caller's
/// transaction so a domain write and its fan-out commit together.
bool notify_in(store::Txn& txn, const std::string& recipient_id, NotificationKind kind,
               const std::string& subject_id, Timestamp now);
std::size_t fan_out_event_created(store::Txn& txn, const Event& event, Timestamp now);
std::size_t fan_out_free_slot(store::Txn& txn, const AvailabilitySlot& slot, Timestamp now);

struct MessagePage {
    std::vector<Message> messages;
    std::optional<std::string> next_cursor;  ///< id of the last message returned
};

inline constexpr std::size_t kDefaultPageSize = 100;

class Comms {
public:
    explicit Comms(Services services) : s_(services) {}

    /// Sends to the conversation between the caller and `peer_id`.
    /// Reader -> Book requires a follow edge; Reader -> Admin (event
    /// management) does not. Books and admins may only reply inside an
    /// existing conversation.
    Message send_message(const Principal& caller, const std::string& peer_id, std::string body);
    Message send_to_conversation(const Principal& caller, const std::string& conversation_id, std::string body);

    MessagePage list_conversation(const Principal& caller, const std::string& conversation_id,
                                  const std::optional<std::string>& cursor = std::nullopt,
                                  std::size_t page_size = kDefaultPageSize) const;
    std::vector<Conversation> conversations(const Principal& caller) const;

    std::size_t notify_event_created(const Event& event);
    std::size_t notify_free_slot(const AvailabilitySlot& slot);

    Notification mark_read(const Principal& caller, const std::string& notification_id);
    /// Newest first, ties by id.
    std::vector<Notification> notifications(const Principal& caller, bool unread_only = false) const;
    std::size_t unread_count(const Principal& caller) const;

private:
    Services s_;
};

}  // namespace golib::comms
