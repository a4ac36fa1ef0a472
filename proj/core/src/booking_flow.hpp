#pragma once

// Transaction-scoped steps shared by scheduling and payments: releasing a
// seat, reclaiming expired holds and refunding a captured intent. Each one
// keeps booking, seat inventory, intent and ledger consistent within the
// caller's transaction.

#include <cstddef>

#include "golib/schema.hpp"
#include "golib/store/store.hpp"

namespace golib::flow {

store::Key inventory_key(const std::string& event_id);
SeatInventory require_inventory(store::Txn& txn, const std::string& event_id);

/// Reserved/Confirmed -> Released. Frees the seat and fails any intent still
/// in Created. A Captured intent must be refunded first.
void release_booking(store::Txn& txn, Booking& booking);

/// Releases every Reserved hold of `inventory` whose hold has lapsed at
/// `now`. Updates `inventory` in place and writes it when anything changed.
std::size_t reclaim_expired(store::Txn& txn, SeatInventory& inventory, Timestamp now);

/// Captured -> Refunded with a Refund ledger entry for the captured amount
/// and the earned loyalty points revoked (never below zero).
void refund(store::Txn& txn, PaymentIntent& intent, Timestamp now);

inline bool hold_lapsed(Timestamp hold_expires_at, Timestamp now) { return now >= hold_expires_at; }

}  // namespace golib::flow
