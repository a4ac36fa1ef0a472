#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "golib/schema.hpp"
#include "golib/services.hpp"

namespace golib::payments {

enum class ProviderOutcome { Success, Failure };

/// Loyalty schedule: None below 500 points (0%), Silver 500..1999 (5%),
/// Gold from 2000 (10%).
LoyaltyTier tier_for_points(std::int64_t points);
int tier_percent(LoyaltyTier tier);

/// floor(base * rate). Throws ValidationFailed for a negative base.
std::int64_t apply_loyalty_discount(std::int64_t base_amount_minor, LoyaltyTier tier);

/// One point per 1000 minor units charged, rounded down.
inline std::int64_t points_for_amount(std::int64_t amount_minor) { return amount_minor / 1000; }

/// Seam for real wallet integrations. The built-in providers are simulators
/// that report whatever outcome they are handed.
class PaymentProvider {
public:
    virtual ~PaymentProvider() = default;
    virtual Provider id() const = 0;
    virtual ProviderOutcome settle(const PaymentIntent& intent, ProviderOutcome requested) = 0;
};

class SimulatedProvider final : public PaymentProvider {
public:
    explicit SimulatedProvider(Provider id) : id_(id) {}
    Provider id() const override { return id_; }
    ProviderOutcome settle(const PaymentIntent&, ProviderOutcome requested) override { return requested; }

private:
    Provider id_;
};

class Payments {
public:
    explicit Payments(Services services);

    void register_provider(std::shared_ptr<PaymentProvider> provider);

    PaymentIntent create_payment_intent(const Principal& caller, const std::string& booking_id, Provider provider);
    /// Provider given by name ("Easypaisa"/"easypaisa", "JazzCash"/"jazzcash").
    PaymentIntent create_payment_intent(const Principal& caller, const std::string& booking_id,
                                        std::string_view provider_name);

    /// Applies the provider's verdict. Success captures, charges the ledger,
    /// confirms the booking and awards points; failure marks the intent
    /// Failed and leaves the booking Reserved with its original hold.
    /// A hold that lapsed before capture releases the booking and throws
    /// HoldExpired.
    PaymentIntent confirm_payment(const std::string& intent_id, ProviderOutcome outcome);
    /// Same, restricted to the payer.
    PaymentIntent confirm_payment(const Principal& caller, const std::string& intent_id, ProviderOutcome outcome);

    /// Refunds a captured intent and releases its booking.
    PaymentIntent refund_payment(const std::string& intent_id);

    PaymentIntent intent(const std::string& intent_id) const;
    std::vector<PaymentIntent> intents_for_booking(const std::string& booking_id) const;

    /// Ordered by (recorded_at, id).
    std::vector<LedgerEntry> ledger() const;
    /// One JSON object per line, ledger order.
    std::string export_ledger() const;

    LoyaltyAccount loyalty(const std::string& account_id) const;

private:
    Services s_;
    std::map<Provider, std::shared_ptr<PaymentProvider>> providers_;
};

}  // namespace golib::payments
