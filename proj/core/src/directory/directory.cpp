#include "golib/directory/directory.hpp"

#include <algorithm>

#include "detail.hpp"
#include "golib/comms/comms.hpp"

namespace golib::directory {

namespace {

std::string follow_id(const std::string& reader_id, const std::string& book_id) { return reader_id + "-" + book_id; }
std::string review_id(const std::string& author_id, const std::string& book_id) {
    return "rev-" + author_id + "-" + book_id;
}

void require_field(const std::string& value, const char* name) {
    if (detail::trim(value).empty()) {
        throw Error(ErrorCode::MissingField, std::string(name) + " is required", {{name, "required"}});
    }
}

void require_admin(store::Txn& txn, const Principal& caller) {
    const auto rec = detail::find_account(txn, caller.account_id);
    if (!rec || rec->account.role != Role::Admin) throw Error(ErrorCode::NotAdmin, "admin role required");
}

AccountRecord require_book_account(store::Txn& txn, const std::string& book_id) {
    auto rec = detail::find_account(txn, book_id);
    if (!rec) throw Error(ErrorCode::UnknownBook, "unknown book " + book_id);
    if (rec->account.role != Role::Book) throw Error(ErrorCode::NotABook, book_id + " is not a book");
    return std::move(*rec);
}

__extension__ using Wide = __int128;

}  // namespace

bool book_precedes(const BookProfile& a, const BookProfile& b) {
    const bool a_rated = a.review_count > 0;
    const bool b_rated = b.review_count > 0;
    if (a_rated != b_rated) return a_rated;
    if (a_rated) {
        // a.sum/a.count vs b.sum/b.count without rounding.
        const auto lhs = static_cast<Wide>(a.rating_sum) * b.review_count;
        const auto rhs = static_cast<Wide>(b.rating_sum) * a.review_count;
        if (lhs != rhs) return lhs > rhs;
    }
    if (a.display_name != b.display_name) return a.display_name < b.display_name;
    return a.account_id < b.account_id;
}

bool is_valid_cnic(std::string_view cnic) {
    std::size_t digits = 0;
    for (char c : cnic) {
        if (c >= '0' && c <= '9') {
            ++digits;
        } else if (c != '-') {
            return false;
        }
    }
    return digits == 13;
}

BecomeBookRequest Directory::submit_become_book_request(const Principal& caller, const BookRequestForm& form) {
    require_field(form.name, "name");
    require_field(form.phone, "phone");
    require_field(form.cnic, "cnic");
    require_field(form.field_of_expertise, "field");
    if (form.vaccination_image.empty()) {
        throw Error(ErrorCode::MissingField, "vaccination image is required", {{"vaccination_image", "required"}});
    }
    if (form.resume.empty()) throw Error(ErrorCode::MissingField, "resume is required", {{"resume", "required"}});
    if (!is_valid_cnic(form.cnic)) throw Error(ErrorCode::InvalidCnic, "CNIC must be 13 digits");
    if (form.vaccination_image.size() > s_.config.max_image_bytes || form.resume.size() > s_.config.max_image_bytes) {
        throw Error(ErrorCode::ImageTooLarge, "attachment exceeds size limit");
    }

    const auto vaccination_ref = s_.blobs.put(form.vaccination_image);
    const auto resume_ref = s_.blobs.put(form.resume);
    const auto now = s_.clock.now();

    return s_.store.transact([&](store::Txn& txn) {
        const auto rec = detail::require_account(txn, caller.account_id);
        if (rec.account.role == Role::Book) throw Error(ErrorCode::AlreadyBook, "account is already a book");
        if (rec.account.role != Role::Reader) throw Error(ErrorCode::NotAuthorized, "only readers may apply");
        const auto pending_key = key(collections::kPendingRequests, caller.account_id);
        if (txn.get(pending_key)) {
            throw Error(ErrorCode::DuplicatePendingRequest, "a request is already awaiting review");
        }
        BecomeBookRequest request;
        request.id = txn.next_id("req");
        request.applicant_id = caller.account_id;
        request.name = detail::trim(form.name);
        request.phone = detail::trim(form.phone);
        request.cnic = detail::trim(form.cnic);
        request.field_of_expertise = detail::trim(form.field_of_expertise);
        request.vaccination_image_ref = vaccination_ref;
        request.resume_ref = resume_ref;
        request.created_at = now;
        txn.put(key(collections::kBookRequests, request.id), request);
        txn.put(pending_key, Json{{"request_id", request.id}});
        return request;
    });
}

BecomeBookRequest Directory::decide_become_book_request(const Principal& admin, const std::string& request_id,
                                                        Decision decision) {
    const auto now = s_.clock.now();
    struct Outcome {
        BecomeBookRequest request;
        std::string applicant_email;
    };
    auto outcome = s_.store.transact([&](store::Txn& txn) {
        require_admin(txn, admin);
        auto request = txn.get_as<BecomeBookRequest>(key(collections::kBookRequests, request_id));
        if (!request) throw Error(ErrorCode::UnknownRequest, "unknown request " + request_id);
        // The version check on this record is what makes concurrent
        // deciders race to exactly one terminal write.
        if (request->state != RequestState::Pending) {
            throw Error(ErrorCode::AlreadyDecided, "request already " + std::string(to_string(request->state)));
        }
        request->state = decision == Decision::Accepted ? RequestState::Accepted : RequestState::Rejected;
        request->decided_by = admin.account_id;
        request->decided_at = now;
        txn.put(key(collections::kBookRequests, request->id), *request);
        txn.erase(key(collections::kPendingRequests, request->applicant_id));

        auto applicant = detail::require_account(txn, request->applicant_id);
        if (decision == Decision::Accepted) {
            applicant.account.role = Role::Book;
            detail::put_account(txn, applicant);
            BookProfile profile;
            profile.account_id = applicant.account.id;
            profile.display_name = request->name;
            profile.profession = request->field_of_expertise;
            txn.put(key(collections::kBooks, profile.account_id), profile);
        }
        comms::notify_in(txn, request->applicant_id, NotificationKind::BookDecision, request->id, now);
        return Outcome{*request, applicant.account.email};
    });

    const bool accepted = outcome.request.state == RequestState::Accepted;
    s_.outbox.append({outcome.applicant_email,
                      accepted ? "Your request to become a book was accepted"
                               : "Your request to become a book was rejected",
                      accepted ? "Congratulations, " + outcome.request.name +
                                     ". Your request to become a book has been accepted. Sign in again to open "
                                     "your book dashboard."
                               : "Hello " + outcome.request.name +
                                     ". Your request to become a book has been rejected. You may submit a new "
                                     "request at any time.",
                      now});
    return outcome.request;
}

std::vector<BecomeBookRequest> Directory::list_requests(const Principal& admin,
                                                        std::optional<RequestState> state) const {
    const auto caller = s_.store.get(key(collections::kAccounts, admin.account_id));
    if (!caller || caller->payload.get<AccountRecord>().account.role != Role::Admin) {
        throw Error(ErrorCode::NotAdmin, "admin role required");
    }
    std::vector<BecomeBookRequest> out;
    for (const auto& rec : s_.store.query(collections::kBookRequests, nullptr, nullptr)) {
        auto request = rec.payload.get<BecomeBookRequest>();
        if (!state || request.state == *state) out.push_back(std::move(request));
    }
    return out;
}

std::vector<BecomeBookRequest> Directory::my_requests(const Principal& caller) const {
    std::vector<BecomeBookRequest> out;
    for (const auto& rec : s_.store.query(
             collections::kBookRequests,
             [&](const store::Record& r) { return r.payload.at("applicant_id") == caller.account_id; }, nullptr)) {
        out.push_back(rec.payload.get<BecomeBookRequest>());
    }
    return out;
}

std::vector<BookProfile> Directory::search_books(const BookQuery& query) const {
    std::vector<BookProfile> out;
    for (const auto& rec : s_.store.snapshot({collections::kBooks}).scan(collections::kBooks)) {
        auto profile = rec.payload.get<BookProfile>();
        if (query.text && !detail::icontains(profile.display_name, *query.text)) continue;
        if (query.profession && !detail::icontains(profile.profession, *query.profession)) continue;
        out.push_back(std::move(profile));
    }
    std::sort(out.begin(), out.end(), book_precedes);
    return out;
}

BookProfile Directory::book(const std::string& book_id) const {
    const auto rec = s_.store.get(key(collections::kBooks, book_id));
    if (!rec) throw Error(ErrorCode::UnknownBook, "unknown book " + book_id);
    return rec->payload.get<BookProfile>();
}

FollowStatus Directory::set_follow(const Principal& caller, const std::string& book_id, bool following) {
    const auto now = s_.clock.now();
    return s_.store.transact([&](store::Txn& txn) {
        detail::require_account(txn, caller.account_id);
        require_book_account(txn, book_id);
        const auto edge_key = key(collections::kFollows, follow_id(caller.account_id, book_id));
        auto edge = txn.get_as<FollowEdge>(edge_key);
        if (following && !edge) {
            edge = FollowEdge{caller.account_id, book_id, now};
            txn.put(edge_key, *edge);
        } else if (!following && edge) {
            txn.erase(edge_key);
            edge.reset();
        }
        return FollowStatus{caller.account_id, book_id, edge.has_value(),
                            edge ? std::optional<Timestamp>(edge->since) : std::nullopt};
    });
}

bool Directory::is_following(const std::string& reader_id, const std::string& book_id) const {
    return s_.store.get(key(collections::kFollows, follow_id(reader_id, book_id))).has_value();
}

std::vector<std::string> Directory::followers(const std::string& book_id) const {
    std::vector<std::string> out;
    for (const auto& rec : s_.store.query(
             collections::kFollows, [&](const store::Record& r) { return r.payload.at("book_id") == book_id; },
             nullptr)) {
        out.push_back(rec.payload.at("reader_id").get<std::string>());
    }
    std::sort(out.begin(), out.end());
    return out;
}

ReviewResult Directory::post_review(const Principal& caller, const std::string& book_id, int stars, std::string text) {
    if (stars < 1 || stars > 5) throw Error(ErrorCode::StarsOutOfRange, "stars must be between 1 and 5");
    const auto now = s_.clock.now();
    return s_.store.transact([&](store::Txn& txn) {
        detail::require_account(txn, caller.account_id);
        require_book_account(txn, book_id);
        if (caller.account_id == book_id) throw Error(ErrorCode::SelfReview, "books cannot review themselves");

        bool eligible = false;
        for (const auto& rec : txn.scan(collections::kBookings)) {
            const auto booking = rec.payload.get<Booking>();
            if (booking.reader_id != caller.account_id || booking.state != BookingState::Confirmed) continue;
            const auto event = txn.get_as<Event>(key(collections::kEvents, booking.event_id));
            if (event && event->host_book_id == book_id) {
                eligible = true;
                break;
            }
        }
        if (!eligible) {
            throw Error(ErrorCode::NoCompletedBooking, "a confirmed booking with this book is required to review");
        }

        auto profile = txn.get_as<BookProfile>(key(collections::kBooks, book_id));
        if (!profile) throw Error(ErrorCode::UnknownBook, "book profile missing for " + book_id);
        const auto rid = review_id(caller.account_id, book_id);
        // Re-posting replaces the earlier review.
        if (const auto previous = txn.get_as<Review>(key(collections::kReviews, rid))) {
            profile->rating_sum -= previous->stars;
            --profile->review_count;
        }
        Review review{rid, book_id, caller.account_id, stars, text, now};
        profile->rating_sum += stars;
        ++profile->review_count;
        txn.put(key(collections::kReviews, rid), review);
        txn.put(key(collections::kBooks, book_id), *profile);
        return ReviewResult{review, *profile};
    });
}

std::vector<Review> Directory::reviews(const std::string& book_id) const {
    std::vector<Review> out;
    for (const auto& rec : s_.store.query(
             collections::kReviews, [&](const store::Record& r) { return r.payload.at("book_id") == book_id; },
             nullptr)) {
        out.push_back(rec.payload.get<Review>());
    }
    std::sort(out.begin(), out.end(), [](const Review& a, const Review& b) {
        return a.created_at != b.created_at ? a.created_at > b.created_at : a.id < b.id;
    });
    return out;
}

}  // namespace golib::directory
