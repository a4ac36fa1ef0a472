#pragma once

#include <optional>
#include <string>
#include <vector>

#include "golib/schema.hpp"
#include "golib/services.hpp"

namespace golib::directory {

/// The become-a-book application form. Images are raw bytes; they are
/// stored content-addressed and only referenced from the request.
struct BookRequestForm {
    std::string name;
    std::string phone;
    std::string cnic;
    std::string field_of_expertise;
    std::string vaccination_image;
    std::string resume;
};

enum class Decision { Accepted, Rejected };

struct BookQuery {
    std::optional<std::string> text;        ///< matched against display_name
    std::optional<std::string> profession;  ///< matched against profession
};

struct FollowStatus {
    std::string reader_id;
    std::string book_id;
    bool following = false;
    std::optional<Timestamp> since;
};

struct ReviewResult {
    Review review;
    BookProfile book;
};

/// Search result order: rated books by mean rating descending (compared as
/// exact rationals), then display name ascending, unrated books last, account
/// id as the final tie-break. A strict total order over distinct accounts.
bool book_precedes(const BookProfile& a, const BookProfile& b);

/// True when `cnic` is 13 digits, optionally written with dashes.
bool is_valid_cnic(std::string_view cnic);

class Directory {
public:
    explicit Directory(Services services) : s_(services) {}

    BecomeBookRequest submit_become_book_request(const Principal& caller, const BookRequestForm& form);
    BecomeBookRequest decide_become_book_request(const Principal& admin, const std::string& request_id,
                                                 Decision decision);
    /// Admin queue, oldest first. `state` filters when given.
    std::vector<BecomeBookRequest> list_requests(const Principal& admin,
                                                 std::optional<RequestState> state = std::nullopt) const;
    /// Requests filed by the caller, oldest first.
    std::vector<BecomeBookRequest> my_requests(const Principal& caller) const;

    std::vector<BookProfile> search_books(const BookQuery& query) const;
    BookProfile book(const std::string& book_id) const;

    FollowStatus set_follow(const Principal& caller, const std::string& book_id, bool following);
    bool is_following(const std::string& reader_id, const std::string& book_id) const;
    std::vector<std::string> followers(const std::string& book_id) const;

    ReviewResult post_review(const Principal& caller, const std::string& book_id, int stars, std::string text);
    std::vector<Review> reviews(const std::string& book_id) const;

private:
    Services s_;
};

}  // namespace golib::directory
