#include "booking_flow.hpp"

#include <algorithm>

#include "golib/errors.hpp"

namespace golib::flow {

store::Key inventory_key(const std::string& event_id) { return key(collections::kSeatInventory, event_id); }

SeatInventory require_inventory(store::Txn& txn, const std::string& event_id) {
    auto inv = txn.get_as<SeatInventory>(inventory_key(event_id));
    if (!inv) throw Error(ErrorCode::UnknownEvent, "unknown event " + event_id);
    return std::move(*inv);
}

namespace {

void release_without_inventory(store::Txn& txn, Booking& booking) {
    booking.state = BookingState::Released;
    txn.put(key(collections::kBookings, booking.id), booking);

    const auto index_key = key(collections::kBookingIntent, booking.id);
    if (const auto index = txn.get(index_key)) {
        const auto intent_key = key(collections::kIntents, index->at("intent_id").get<std::string>());
        if (auto intent = txn.get_as<PaymentIntent>(intent_key)) {
            if (intent->state == IntentState::Captured) {
                throw Error(ErrorCode::StorageFailure, "release of booking " + booking.id + " with captured payment");
            }
            if (intent->state == IntentState::Created) {
                intent->state = IntentState::Failed;
                txn.put(intent_key, *intent);
            }
        }
        txn.erase(index_key);
    }
}

}  // namespace

void release_booking(store::Txn& txn, Booking& booking) {
    auto inv = require_inventory(txn, booking.event_id);
    std::erase_if(inv.holds, [&](const SeatInventory::Hold& h) { return h.booking_id == booking.id; });
    txn.put(inventory_key(booking.event_id), inv);
    release_without_inventory(txn, booking);
}

std::size_t reclaim_expired(store::Txn& txn, SeatInventory& inventory, Timestamp now) {
    std::size_t released = 0;
    std::vector<SeatInventory::Hold> kept;
    kept.reserve(inventory.holds.size());
    for (auto& hold : inventory.holds) {
        if (hold.confirmed || !hold_lapsed(hold.hold_expires_at, now)) {
            kept.push_back(std::move(hold));
            continue;
        }
        auto booking = txn.get_as<Booking>(key(collections::kBookings, hold.booking_id));
        if (booking && booking->state == BookingState::Reserved) release_without_inventory(txn, *booking);
        ++released;
    }
    inventory.holds = std::move(kept);
    if (released > 0) txn.put(inventory_key(inventory.event_id), inventory);
    return released;
}

void refund(store::Txn& txn, PaymentIntent& intent, Timestamp now) {
    if (intent.state == IntentState::Refunded) throw Error(ErrorCode::AlreadyRefunded, "intent already refunded");
    if (intent.state != IntentState::Captured) throw Error(ErrorCode::NotCaptured, "intent was never captured");

    LedgerEntry entry{txn.next_id("led"), intent.id, LedgerDirection::Refund, intent.amount_minor, now};
    txn.put(key(collections::kLedger, entry.id), entry);

    const auto loyalty_key = key(collections::kLoyalty, intent.payer_id);
    auto loyalty = txn.get_as<LoyaltyAccount>(loyalty_key).value_or(LoyaltyAccount{intent.payer_id, 0});
    loyalty.points = std::max<std::int64_t>(0, loyalty.points - intent.points_awarded);
    txn.put(loyalty_key, loyalty);

    intent.state = IntentState::Refunded;
    txn.put(key(collections::kIntents, intent.id), intent);
}

}  // namespace golib::flow
