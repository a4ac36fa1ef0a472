#include "golib/comms/comms.hpp"

#include <algorithm>

#include "detail.hpp"

namespace golib::comms {

namespace {

std::string conversation_id(const std::string& reader_id, const std::string& book_id) {
    return "conv-" + reader_id + "-" + book_id;
}

std::size_t utf8_length(std::string_view text) {
    std::size_t n = 0;
    for (unsigned char c : text) n += (c & 0xC0) != 0x80 ? 1 : 0;
    return n;
}

bool is_host_role(Role role) { return role == Role::Book || role == Role::Admin; }

bool message_precedes(const store::Record& a, const store::Record& b) {
    const auto& ta = a.payload.at("sent_at").get_ref<const std::string&>();
    const auto& tb = b.payload.at("sent_at").get_ref<const std::string&>();
    // RFC 3339 UTC strings of fixed width order like the instants they encode.
    if (ta != tb) return ta < tb;
    return a.key.id < b.key.id;
}

}  // namespace

std::string notification_id(const std::string& recipient_id, NotificationKind kind, const std::string& subject_id) {
    return "ntf-" + recipient_id + "-" + std::string(to_string(kind)) + "-" + subject_id;
}

bool notify_in(store::Txn& txn, const std::string& recipient_id, NotificationKind kind,
               const std::string& subject_id, Timestamp now) {
    const auto id = notification_id(recipient_id, kind, subject_id);
    const auto k = key(collections::kNotifications, id);
    if (txn.get(k)) return false;
    txn.put(k, Notification{id, recipient_id, kind, subject_id, now, false});
    return true;
}

std::size_t fan_out_event_created(store::Txn& txn, const Event& event, Timestamp now) {
    std::size_t created = 0;
    for (const auto& rec : txn.scan(collections::kAccounts)) {
        if (rec.key.id == event.created_by) continue;
        created += notify_in(txn, rec.key.id, NotificationKind::EventCreated, event.id, now) ? 1 : 0;
    }
    return created;
}

std::size_t fan_out_free_slot(store::Txn& txn, const AvailabilitySlot& slot, Timestamp now) {
    std::size_t created = 0;
    for (const auto& rec : txn.scan(collections::kFollows)) {
        const auto edge = rec.payload.get<FollowEdge>();
        if (edge.book_id != slot.book_id) continue;
        created += notify_in(txn, edge.reader_id, NotificationKind::FreeSlotPosted, slot.id, now) ? 1 : 0;
    }
    return created;
}

Message Comms::send_message(const Principal& caller, const std::string& peer_id, std::string body) {
    if (detail::trim(body).empty()) throw Error(ErrorCode::EmptyBody, "message body is empty");
    if (utf8_length(body) > s_.config.max_message_chars) {
        throw Error(ErrorCode::BodyTooLong,
                    "message exceeds " + std::to_string(s_.config.max_message_chars) + " characters");
    }
    const auto now = s_.clock.now();

    return s_.store.transact([&](store::Txn& txn) {
        const auto sender = detail::require_account(txn, caller.account_id);
        const auto peer = detail::find_account(txn, peer_id);
        if (!peer || peer_id == caller.account_id) throw Error(ErrorCode::UnknownBook, "unknown book " + peer_id);

        std::string reader_id;
        std::string book_id;
        bool follow_verified = false;
        const auto reply_key = key(collections::kConversations, conversation_id(peer_id, caller.account_id));

        if (is_host_role(sender.account.role) && txn.get(reply_key)) {
            // Reply from the book (or management) side of an existing thread.
            reader_id = peer_id;
            book_id = caller.account_id;
        } else if (is_host_role(peer->account.role)) {
            reader_id = caller.account_id;
            book_id = peer_id;
            if (peer->account.role == Role::Book) {
                const auto edge = txn.get(key(collections::kFollows, reader_id + "-" + book_id));
                if (!edge) throw Error(ErrorCode::NotFollowing, "follow this book to message it");
                follow_verified = true;
            }
        } else if (is_host_role(sender.account.role)) {
            throw Error(ErrorCode::NoConversation, "books can only reply to readers who wrote first");
        } else {
            throw Error(ErrorCode::UnknownBook, peer_id + " is not a book");
        }

        const auto conv_key = key(collections::kConversations, conversation_id(reader_id, book_id));
        if (!txn.get(conv_key)) txn.put(conv_key, Conversation{conv_key.id, reader_id, book_id, now});

        Message message{txn.next_id("msg"), conv_key.id, caller.account_id, body, now, follow_verified};
        txn.put(key(collections::kMessages, message.id), message);
        return message;
    });
}

Message Comms::send_to_conversation(const Principal& caller, const std::string& conversation_id,
                                    std::string body) {
    const auto rec = s_.store.get(key(collections::kConversations, conversation_id));
    if (!rec) throw Error(ErrorCode::UnknownConversation, "unknown conversation " + conversation_id);
    const auto conv = rec->payload.get<Conversation>();
    if (caller.account_id == conv.reader_id) return send_message(caller, conv.book_id, std::move(body));
    if (caller.account_id == conv.book_id) return send_message(caller, conv.reader_id, std::move(body));
    throw Error(ErrorCode::NotParticipant, "not a participant in this conversation");
}

MessagePage Comms::list_conversation(const Principal& caller, const std::string& conversation_id,
                                     const std::optional<std::string>& cursor, std::size_t page_size) const {
    const auto rec = s_.store.get(key(collections::kConversations, conversation_id));
    if (!rec) throw Error(ErrorCode::UnknownConversation, "unknown conversation " + conversation_id);
    const auto conv = rec->payload.get<Conversation>();
    if (caller.account_id != conv.reader_id && caller.account_id != conv.book_id) {
        throw Error(ErrorCode::NotParticipant, "not a participant in this conversation");
    }
    if (page_size == 0) throw Error(ErrorCode::ValidationFailed, "page size must be positive");

    store::PageRequest page;
    page.limit = page_size + 1;
    if (cursor) {
        auto after = s_.store.get(key(collections::kMessages, *cursor));
        if (!after || after->payload.at("conversation_id") != conversation_id) {
            throw Error(ErrorCode::ValidationFailed, "invalid cursor");
        }
        page.after = std::move(after);
    }
    auto rows = s_.store.query(
        collections::kMessages,
        [&](const store::Record& r) { return r.payload.at("conversation_id") == conversation_id; },
        message_precedes, page);

    MessagePage out;
    const bool more = rows.size() > page_size;
    if (more) rows.pop_back();
    for (const auto& row : rows) out.messages.push_back(row.payload.get<Message>());
    if (more) out.next_cursor = out.messages.back().id;
    return out;
}

std::vector<Conversation> Comms::conversations(const Principal& caller) const {
    std::vector<Conversation> out;
    for (const auto& rec : s_.store.query(
             collections::kConversations,
             [&](const store::Record& r) {
                 return r.payload.at("reader_id") == caller.account_id || r.payload.at("book_id") == caller.account_id;
             },
             nullptr)) {
        out.push_back(rec.payload.get<Conversation>());
    }
    return out;
}

std::size_t Comms::notify_event_created(const Event& event) {
    const auto now = s_.clock.now();
    return s_.store.transact([&](store::Txn& txn) { return fan_out_event_created(txn, event, now); });
}

std::size_t Comms::notify_free_slot(const AvailabilitySlot& slot) {
    const auto now = s_.clock.now();
    return s_.store.transact([&](store::Txn& txn) {
        const auto owner = detail::find_account(txn, slot.book_id);
        if (!owner || owner->account.role != Role::Book) {
            throw Error(ErrorCode::NotABook, "slot owner " + slot.book_id + " is not a book");
        }
        return fan_out_free_slot(txn, slot, now);
    });
}

Notification Comms::mark_read(const Principal& caller, const std::string& notification_id) {
    return s_.store.transact([&](store::Txn& txn) {
        const auto k = key(collections::kNotifications, notification_id);
        auto n = txn.get_as<Notification>(k);
        if (!n) throw Error(ErrorCode::UnknownNotification, "unknown notification " + notification_id);
        if (n->recipient_id != caller.account_id) throw Error(ErrorCode::NotRecipient, "not your notification");
        if (!n->read) {
            n->read = true;
            txn.put(k, *n);
        }
        return *n;
    });
}

std::vector<Notification> Comms::notifications(const Principal& caller, bool unread_only) const {
    std::vector<Notification> out;
    for (const auto& rec : s_.store.query(
             collections::kNotifications,
             [&](const store::Record& r) {
                 return r.payload.at("recipient_id") == caller.account_id &&
                        (!unread_only || !r.payload.at("read").get<bool>());
             },
             nullptr)) {
        out.push_back(rec.payload.get<Notification>());
    }
    std::stable_sort(out.begin(), out.end(), [](const Notification& a, const Notification& b) {
        return a.created_at > b.created_at;
    });
    return out;
}

std::size_t Comms::unread_count(const Principal& caller) const { return notifications(caller, true).size(); }

}  // namespace golib::comms
