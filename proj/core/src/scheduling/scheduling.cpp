#include "golib/scheduling/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "booking_flow.hpp"
#include "detail.hpp"
#include "golib/comms/comms.hpp"

namespace golib::scheduling {

namespace {

constexpr double kPi = 3.14159265358979323846;

double radians(double degrees) { return degrees * kPi / 180.0; }

bool event_in_category(const Event& e, Category c) {
    switch (c) {
        case Category::All: return true;
        case Category::Events: return e.kind == EventKind::PublicEvent;
        case Category::PrivateSession: return e.kind == EventKind::PrivateSession;
    }
    return false;
}

std::vector<AvailabilitySlot> slots_of(store::Txn& txn, const std::string& book_id) {
    std::vector<AvailabilitySlot> out;
    for (const auto& rec : txn.scan(collections::kSlots)) {
        auto slot = rec.payload.get<AvailabilitySlot>();
        if (slot.book_id == book_id) out.push_back(std::move(slot));
    }
    return out;
}

}  // namespace

void check_coordinates(double latitude, double longitude) {
    if (!std::isfinite(latitude) || !std::isfinite(longitude) || latitude < -90.0 || latitude > 90.0 ||
        longitude < -180.0 || longitude > 180.0) {
        throw Error(ErrorCode::CoordinateOutOfRange, "coordinates out of range");
    }
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    check_coordinates(lat1, lon1);
    check_coordinates(lat2, lon2);
    const double phi1 = radians(lat1);
    const double phi2 = radians(lat2);
    const double dphi = std::sin((phi2 - phi1) / 2.0);
    const double dlambda = std::sin(radians(lon2 - lon1) / 2.0);
    const double a = std::clamp(dphi * dphi + std::cos(phi1) * std::cos(phi2) * dlambda * dlambda, 0.0, 1.0);
    return 2.0 * kEarthRadiusKm * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
}

std::optional<Category> parse_category(std::string_view text) {
    const auto lower = detail::lowercase(text);
    if (lower.empty() || lower == "all") return Category::All;
    if (lower == "events" || lower == "event" || lower == "publicevent") return Category::Events;
    if (lower == "privatesession" || lower == "private_session" || lower == "private-session" ||
        lower == "private") {
        return Category::PrivateSession;
    }
    return std::nullopt;
}

bool event_precedes(const Event& a, const Event& b) {
    if (a.starts_at != b.starts_at) return a.starts_at < b.starts_at;
    return a.id < b.id;
}

Event Scheduling::create_event(const Principal& caller, const EventDraft& draft) {
    if (detail::trim(draft.title).empty()) {
        throw Error(ErrorCode::ValidationFailed, "title is required", {{"title", "required"}});
    }
    if (!(draft.starts_at < draft.ends_at)) throw Error(ErrorCode::InvalidTimeRange, "event must end after it starts");
    if (draft.kind == EventKind::PublicEvent && draft.capacity < 1) {
        throw Error(ErrorCode::InvalidCapacity, "capacity must be at least 1");
    }
    if (draft.price_minor < 0) {
        throw Error(ErrorCode::ValidationFailed, "price must be non-negative", {{"price_minor", "negative"}});
    }
    check_coordinates(draft.venue.latitude, draft.venue.longitude);
    const auto now = s_.clock.now();

    return s_.store.transact([&](store::Txn& txn) {
        const auto creator = detail::require_account(txn, caller.account_id);
        const auto role = creator.account.role;
        Event event;
        event.kind = draft.kind;
        event.title = detail::trim(draft.title);
        event.venue = draft.venue;
        event.starts_at = draft.starts_at;
        event.ends_at = draft.ends_at;
        event.capacity = draft.capacity;
        event.price_minor = draft.price_minor;
        event.created_by = caller.account_id;

        if (draft.kind == EventKind::PublicEvent) {
            if (role == Role::Book) {
                event.host_book_id = caller.account_id;
            } else if (role != Role::Admin) {
                throw Error(ErrorCode::NotAuthorized, "only books and admins may create events");
            }
        } else {
            if (role != Role::Book) throw Error(ErrorCode::NotAuthorized, "only books may create private sessions");
            event.host_book_id = caller.account_id;
            event.capacity = 1;
            const auto slots = slots_of(txn, caller.account_id);
            const bool covered = std::any_of(slots.begin(), slots.end(), [&](const AvailabilitySlot& s) {
                return s.starts_at <= event.starts_at && event.ends_at <= s.ends_at;
            });
            if (!covered) throw Error(ErrorCode::OutsideAvailability, "session is outside the book's availability");
        }

        event.id = txn.next_id("evt");
        txn.put(key(collections::kEvents, event.id), event);
        txn.put(flow::inventory_key(event.id), SeatInventory{event.id, event.capacity, {}});
        comms::fan_out_event_created(txn, event, now);
        return event;
    });
}

Event Scheduling::event(const std::string& event_id) const {
    const auto rec = s_.store.get(key(collections::kEvents, event_id));
    if (!rec) throw Error(ErrorCode::UnknownEvent, "unknown event " + event_id);
    return rec->payload.get<Event>();
}

AvailabilitySlot Scheduling::post_availability(const Principal& caller, Timestamp starts_at, Timestamp ends_at) {
    if (!(starts_at < ends_at)) throw Error(ErrorCode::InvalidTimeRange, "slot must end after it starts");
    const auto now = s_.clock.now();
    return s_.store.transact([&](store::Txn& txn) {
        const auto owner = detail::require_account(txn, caller.account_id);
        if (owner.account.role != Role::Book) throw Error(ErrorCode::NotABook, "only books may post availability");
        for (const auto& existing : slots_of(txn, caller.account_id)) {
            if (overlaps(existing.starts_at, existing.ends_at, starts_at, ends_at)) {
                throw Error(ErrorCode::OverlappingSlot, "slot overlaps " + existing.id);
            }
        }
        AvailabilitySlot slot{txn.next_id("slot"), caller.account_id, starts_at, ends_at};
        txn.put(key(collections::kSlots, slot.id), slot);
        comms::fan_out_free_slot(txn, slot, now);
        return slot;
    });
}

std::vector<AvailabilitySlot> Scheduling::slots(const std::string& book_id) const {
    std::vector<AvailabilitySlot> out;
    for (const auto& rec : s_.store.query(
             collections::kSlots, [&](const store::Record& r) { return r.payload.at("book_id") == book_id; },
             nullptr)) {
        out.push_back(rec.payload.get<AvailabilitySlot>());
    }
    std::sort(out.begin(), out.end(), [](const AvailabilitySlot& a, const AvailabilitySlot& b) {
        return a.starts_at != b.starts_at ? a.starts_at < b.starts_at : a.id < b.id;
    });
    return out;
}

std::vector<Event> Scheduling::search_events(const EventQuery& query) const {
    const auto from = query.from.value_or(s_.clock.now());
    const auto snap = s_.store.snapshot({collections::kEvents, collections::kBooks});
    std::vector<Event> out;
    for (const auto& rec : snap.scan(collections::kEvents)) {
        auto event = rec.payload.get<Event>();
        if (event.starts_at < from || !event_in_category(event, query.category)) continue;
        if (query.text && !query.text->empty()) {
            bool match = detail::icontains(event.title, *query.text);
            if (!match && event.host_book_id) {
                if (const auto host = snap.get(key(collections::kBooks, *event.host_book_id))) {
                    match = detail::icontains(host->payload.at("display_name").get<std::string>(), *query.text);
                }
            }
            if (!match) continue;
        }
        out.push_back(std::move(event));
    }
    std::sort(out.begin(), out.end(), event_precedes);
    return out;
}

std::vector<NearbyEvent> Scheduling::events_near(double latitude, double longitude, double radius_km) const {
    check_coordinates(latitude, longitude);
    if (!std::isfinite(radius_km) || radius_km <= 0) throw Error(ErrorCode::InvalidRadius, "radius must be positive");
    const auto now = s_.clock.now();
    std::vector<NearbyEvent> out;
    for (const auto& rec : s_.store.snapshot({collections::kEvents}).scan(collections::kEvents)) {
        auto event = rec.payload.get<Event>();
        if (event.starts_at < now) continue;
        const double d = haversine_km(latitude, longitude, event.venue.latitude, event.venue.longitude);
        if (d <= radius_km) out.push_back({std::move(event), d});
    }
    std::sort(out.begin(), out.end(), [](const NearbyEvent& a, const NearbyEvent& b) {
        if (a.distance_km != b.distance_km) return a.distance_km < b.distance_km;
        return event_precedes(a.event, b.event);
    });
    return out;
}

Booking Scheduling::book_seat(const Principal& caller, const std::string& event_id) {
    const auto now = s_.clock.now();
    const auto hold_ttl = s_.config.hold_ttl;
    return s_.store.transact([&](store::Txn& txn) {
        const auto reader = detail::require_account(txn, caller.account_id);
        if (!reader.account.vaccination) {
            throw Error(ErrorCode::NotVaccinated, "upload both sides of your vaccination card before booking");
        }
        const auto event = txn.get_as<Event>(key(collections::kEvents, event_id));
        if (!event) throw Error(ErrorCode::UnknownEvent, "unknown event " + event_id);
        if (event->starts_at <= now) throw Error(ErrorCode::EventInPast, "event has already started");

        auto inventory = flow::require_inventory(txn, event_id);
        flow::reclaim_expired(txn, inventory, now);
        for (const auto& hold : inventory.holds) {
            if (hold.reader_id == caller.account_id) {
                throw Error(ErrorCode::DuplicateBooking, "you already hold a seat for this event");
            }
        }
        if (static_cast<std::int64_t>(inventory.holds.size()) >= inventory.capacity) {
            throw Error(ErrorCode::SoldOut, "no seats left");
        }

        Booking booking;
        booking.id = txn.next_id("bkg");
        booking.event_id = event_id;
        booking.reader_id = caller.account_id;
        booking.state = BookingState::Reserved;
        booking.reserved_at = now;
        booking.hold_expires_at = now + hold_ttl;
        inventory.holds.push_back({booking.id, caller.account_id, false, booking.hold_expires_at});
        txn.put(key(collections::kBookings, booking.id), booking);
        txn.put(flow::inventory_key(event_id), inventory);
        return booking;
    });
}

Booking Scheduling::cancel_booking(const Principal& caller, const std::string& booking_id) {
    const auto now = s_.clock.now();
    return s_.store.transact([&](store::Txn& txn) {
        auto booking = txn.get_as<Booking>(key(collections::kBookings, booking_id));
        if (!booking) throw Error(ErrorCode::UnknownBooking, "unknown booking " + booking_id);
        if (booking->reader_id != caller.account_id) throw Error(ErrorCode::NotOwner, "not your booking");
        if (booking->state == BookingState::Released) throw Error(ErrorCode::AlreadyReleased, "already released");
        if (booking->state == BookingState::Confirmed && booking->payment_id) {
            auto intent = txn.get_as<PaymentIntent>(key(collections::kIntents, *booking->payment_id));
            if (intent && intent->state == IntentState::Captured) flow::refund(txn, *intent, now);
        }
        flow::release_booking(txn, *booking);
        return *booking;
    });
}

Booking Scheduling::booking(const std::string& booking_id) const {
    const auto rec = s_.store.get(key(collections::kBookings, booking_id));
    if (!rec) throw Error(ErrorCode::UnknownBooking, "unknown booking " + booking_id);
    return rec->payload.get<Booking>();
}

std::vector<Booking> Scheduling::bookings_of(const Principal& caller) const {
    std::vector<Booking> out;
    for (const auto& rec : s_.store.query(
             collections::kBookings,
             [&](const store::Record& r) { return r.payload.at("reader_id") == caller.account_id; }, nullptr)) {
        out.push_back(rec.payload.get<Booking>());
    }
    return out;
}

std::vector<Booking> Scheduling::bookings_for_event(const std::string& event_id) const {
    std::vector<Booking> out;
    for (const auto& rec : s_.store.query(
             collections::kBookings, [&](const store::Record& r) { return r.payload.at("event_id") == event_id; },
             nullptr)) {
        out.push_back(rec.payload.get<Booking>());
    }
    return out;
}

std::int64_t Scheduling::seats_taken(const std::string& event_id) const {
    const auto rec = s_.store.get(flow::inventory_key(event_id));
    if (!rec) throw Error(ErrorCode::UnknownEvent, "unknown event " + event_id);
    const auto inventory = rec->payload.get<SeatInventory>();
    const auto now = s_.clock.now();
    return std::count_if(inventory.holds.begin(), inventory.holds.end(), [&](const SeatInventory::Hold& h) {
        return h.confirmed || !flow::hold_lapsed(h.hold_expires_at, now);
    });
}

CalendarMonth Scheduling::calendar_month(const std::optional<Principal>& caller, int year, unsigned month) const {
    using namespace std::chrono;
    if (month < 1 || month > 12 || year < 1970 || year > 9999) throw Error(ErrorCode::InvalidMonth, "invalid month");
    const auto first = sys_days{std::chrono::year{year} / std::chrono::month{month} / 1};
    const auto last = sys_days{std::chrono::year{year} / std::chrono::month{month} / std::chrono::last};
    const Timestamp month_start{first};
    const Timestamp month_end{last + days{1}};

    CalendarMonth out;
    out.year = year;
    out.month = month;
    const auto snap = s_.store.snapshot({collections::kEvents, collections::kSlots, collections::kAccounts});
    for (const auto& rec : snap.scan(collections::kEvents)) {
        auto event = rec.payload.get<Event>();
        if (event.starts_at < month_start || event.starts_at >= month_end) continue;
        const auto day = static_cast<unsigned>(utc_date(event.starts_at).day());
        out.events_by_day[day].push_back(std::move(event));
    }
    for (auto& [day, events] : out.events_by_day) {
        std::sort(events.begin(), events.end(), event_precedes);
        out.highlighted.push_back(day);
    }

    if (caller) {
        const auto account = snap.get(key(collections::kAccounts, caller->account_id));
        if (account && account->payload.at("role") == "Book") {
            std::set<unsigned> days_with_slots;
            for (const auto& rec : snap.scan(collections::kSlots)) {
                const auto slot = rec.payload.get<AvailabilitySlot>();
                if (slot.book_id != caller->account_id) continue;
                const auto begin = std::max(slot.starts_at, month_start);
                const auto end = std::min(slot.ends_at, month_end);
                for (auto d = floor<days>(begin); Timestamp{d} < end; d += days{1}) {
                    days_with_slots.insert(static_cast<unsigned>(year_month_day{d}.day()));
                }
            }
            out.availability_days.assign(days_with_slots.begin(), days_with_slots.end());
        }
    }
    return out;
}

std::size_t Scheduling::release_expired_holds() {
    const auto now = s_.clock.now();
    std::vector<std::string> candidates;
    for (const auto& rec : s_.store.query(collections::kSeatInventory, nullptr, nullptr)) {
        const auto inv = rec.payload.get<SeatInventory>();
        if (std::any_of(inv.holds.begin(), inv.holds.end(), [&](const SeatInventory::Hold& h) {
                return !h.confirmed && flow::hold_lapsed(h.hold_expires_at, now);
            })) {
            candidates.push_back(inv.event_id);
        }
    }
    std::size_t released = 0;
    for (const auto& event_id : candidates) {
        released += s_.store.transact([&](store::Txn& txn) {
            auto inventory = flow::require_inventory(txn, event_id);
            return flow::reclaim_expired(txn, inventory, now);
        });
    }
    return released;
}

}  // namespace golib::scheduling
