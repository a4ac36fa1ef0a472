#include "golib/payments/payments.hpp"

#include <algorithm>

#include "booking_flow.hpp"
#include "detail.hpp"

namespace golib::payments {

namespace {

store::Key intent_key(const std::string& id) { return key(collections::kIntents, id); }

PaymentIntent require_intent(store::Txn& txn, const std::string& intent_id) {
    auto intent = txn.get_as<PaymentIntent>(intent_key(intent_id));
    if (!intent) throw Error(ErrorCode::UnknownIntent, "unknown payment intent " + intent_id);
    return std::move(*intent);
}

}  // namespace

LoyaltyTier tier_for_points(std::int64_t points) {
    if (points >= 2000) return LoyaltyTier::Gold;
    if (points >= 500) return LoyaltyTier::Silver;
    return LoyaltyTier::None;
}

int tier_percent(LoyaltyTier tier) {
    switch (tier) {
        case LoyaltyTier::None: return 0;
        case LoyaltyTier::Silver: return 5;
        case LoyaltyTier::Gold: return 10;
    }
    return 0;
}

std::int64_t apply_loyalty_discount(std::int64_t base_amount_minor, LoyaltyTier tier) {
    if (base_amount_minor < 0) throw Error(ErrorCode::ValidationFailed, "amount must be non-negative");
    // Integer division is floor for non-negative operands.
    return base_amount_minor * tier_percent(tier) / 100;
}

Payments::Payments(Services services) : s_(services) {
    register_provider(std::make_shared<SimulatedProvider>(Provider::Easypaisa));
    register_provider(std::make_shared<SimulatedProvider>(Provider::JazzCash));
}

void Payments::register_provider(std::shared_ptr<PaymentProvider> provider) {
    const auto id = provider->id();
    providers_[id] = std::move(provider);
}

PaymentIntent Payments::create_payment_intent(const Principal& caller, const std::string& booking_id,
                                              std::string_view provider_name) {
    const auto provider = parse_provider(provider_name);
    if (!provider) throw Error(ErrorCode::UnknownProvider, "unknown payment provider " + std::string(provider_name));
    return create_payment_intent(caller, booking_id, *provider);
}

PaymentIntent Payments::create_payment_intent(const Principal& caller, const std::string& booking_id,
                                              Provider provider) {
    if (!providers_.contains(provider)) throw Error(ErrorCode::UnknownProvider, "provider not configured");
    const auto now = s_.clock.now();
    return s_.store.transact([&](store::Txn& txn) {
        const auto booking = txn.get_as<Booking>(key(collections::kBookings, booking_id));
        if (!booking) throw Error(ErrorCode::UnknownBooking, "unknown booking " + booking_id);
        if (booking->reader_id != caller.account_id) throw Error(ErrorCode::NotOwner, "not your booking");

        const auto index_key = key(collections::kBookingIntent, booking_id);
        if (const auto index = txn.get(index_key)) {
            const auto existing = require_intent(txn, index->at("intent_id").get<std::string>());
            if (existing.state != IntentState::Failed) {
                throw Error(ErrorCode::DuplicateIntent, "booking already has payment " + existing.id);
            }
        }
        if (flow::hold_lapsed(booking->hold_expires_at, now) && booking->state != BookingState::Confirmed) {
            throw Error(ErrorCode::HoldExpired, "seat hold expired; book again");
        }
        if (booking->state != BookingState::Reserved) {
            throw Error(ErrorCode::BookingNotReserved, "booking is " + std::string(to_string(booking->state)));
        }

        const auto event = txn.get_as<Event>(key(collections::kEvents, booking->event_id));
        if (!event) throw Error(ErrorCode::UnknownEvent, "unknown event " + booking->event_id);
        const auto loyalty =
            txn.get_as<LoyaltyAccount>(key(collections::kLoyalty, caller.account_id)).value_or(LoyaltyAccount{});

        PaymentIntent intent;
        intent.id = txn.next_id("pay");
        intent.booking_id = booking_id;
        intent.payer_id = caller.account_id;
        intent.provider = provider;
        intent.base_amount_minor = event->price_minor;
        intent.discount_minor = apply_loyalty_discount(event->price_minor, tier_for_points(loyalty.points));
        intent.amount_minor = intent.base_amount_minor - intent.discount_minor;
        intent.state = IntentState::Created;
        intent.created_at = now;
        txn.put(intent_key(intent.id), intent);
        txn.put(index_key, Json{{"intent_id", intent.id}});
        return intent;
    });
}

PaymentIntent Payments::confirm_payment(const Principal& caller, const std::string& intent_id,
                                        ProviderOutcome outcome) {
    const auto rec = s_.store.get(intent_key(intent_id));
    if (!rec) throw Error(ErrorCode::UnknownIntent, "unknown payment intent " + intent_id);
    if (rec->payload.at("payer_id") != caller.account_id) throw Error(ErrorCode::NotOwner, "not your payment");
    return confirm_payment(intent_id, outcome);
}

PaymentIntent Payments::confirm_payment(const std::string& intent_id, ProviderOutcome requested) {
    const auto snapshot = intent(intent_id);
    if (snapshot.state != IntentState::Created) {
        throw Error(ErrorCode::AlreadyFinal, "payment already " + std::string(to_string(snapshot.state)));
    }
    const auto verdict = providers_.at(snapshot.provider)->settle(snapshot, requested);
    const auto now = s_.clock.now();

    struct Result {
        PaymentIntent intent;
        bool hold_expired = false;
    };
    const auto result = s_.store.transact([&](store::Txn& txn) {
        auto intent = require_intent(txn, intent_id);
        if (intent.state != IntentState::Created) {
            throw Error(ErrorCode::AlreadyFinal, "payment already " + std::string(to_string(intent.state)));
        }
        auto booking = txn.get_as<Booking>(key(collections::kBookings, intent.booking_id));
        if (!booking) throw Error(ErrorCode::UnknownBooking, "unknown booking " + intent.booking_id);
        if (booking->state != BookingState::Reserved) {
            throw Error(ErrorCode::BookingNotReserved, "booking is " + std::string(to_string(booking->state)));
        }

        if (verdict == ProviderOutcome::Failure) {
            intent.state = IntentState::Failed;
            txn.put(intent_key(intent.id), intent);
            txn.erase(key(collections::kBookingIntent, booking->id));
            return Result{intent, false};
        }
        if (flow::hold_lapsed(booking->hold_expires_at, now)) {
            // Late capture: the seat is gone, so the payment is not taken.
            flow::release_booking(txn, *booking);
            return Result{require_intent(txn, intent_id), true};
        }

        intent.state = IntentState::Captured;
        intent.points_awarded = points_for_amount(intent.amount_minor);
        txn.put(intent_key(intent.id), intent);

        LedgerEntry charge{txn.next_id("led"), intent.id, LedgerDirection::Charge, intent.amount_minor, now};
        txn.put(key(collections::kLedger, charge.id), charge);

        const auto loyalty_key = key(collections::kLoyalty, intent.payer_id);
        auto loyalty = txn.get_as<LoyaltyAccount>(loyalty_key).value_or(LoyaltyAccount{intent.payer_id, 0});
        loyalty.points += intent.points_awarded;
        txn.put(loyalty_key, loyalty);

        booking->state = BookingState::Confirmed;
        booking->payment_id = intent.id;
        txn.put(key(collections::kBookings, booking->id), *booking);

        auto inventory = flow::require_inventory(txn, booking->event_id);
        for (auto& hold : inventory.holds) {
            if (hold.booking_id == booking->id) hold.confirmed = true;
        }
        txn.put(flow::inventory_key(booking->event_id), inventory);
        return Result{intent, false};
    });
    if (result.hold_expired) throw Error(ErrorCode::HoldExpired, "seat hold expired before payment completed");
    return result.intent;
}

PaymentIntent Payments::refund_payment(const std::string& intent_id) {
    const auto now = s_.clock.now();
    return s_.store.transact([&](store::Txn& txn) {
        auto intent = require_intent(txn, intent_id);
        flow::refund(txn, intent, now);
        auto booking = txn.get_as<Booking>(key(collections::kBookings, intent.booking_id));
        if (booking && booking->state == BookingState::Confirmed) flow::release_booking(txn, *booking);
        return intent;
    });
}

PaymentIntent Payments::intent(const std::string& intent_id) const {
    const auto rec = s_.store.get(intent_key(intent_id));
    if (!rec) throw Error(ErrorCode::UnknownIntent, "unknown payment intent " + intent_id);
    return rec->payload.get<PaymentIntent>();
}

std::vector<PaymentIntent> Payments::intents_for_booking(const std::string& booking_id) const {
    std::vector<PaymentIntent> out;
    for (const auto& rec : s_.store.query(
             collections::kIntents, [&](const store::Record& r) { return r.payload.at("booking_id") == booking_id; },
             nullptr)) {
        out.push_back(rec.payload.get<PaymentIntent>());
    }
    return out;
}

std::vector<LedgerEntry> Payments::ledger() const {
    std::vector<LedgerEntry> out;
    for (const auto& rec : s_.store.query(collections::kLedger, nullptr, nullptr)) {
        out.push_back(rec.payload.get<LedgerEntry>());
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const LedgerEntry& a, const LedgerEntry& b) { return a.recorded_at < b.recorded_at; });
    return out;
}

std::string Payments::export_ledger() const {
    std::string out;
    for (const auto& entry : ledger()) {
        out += Json(entry).dump();
        out += '\n';
    }
    return out;
}

LoyaltyAccount Payments::loyalty(const std::string& account_id) const {
    const auto rec = s_.store.get(key(collections::kLoyalty, account_id));
    if (!rec) return LoyaltyAccount{account_id, 0};
    return rec->payload.get<LoyaltyAccount>();
}

}  // namespace golib::payments
