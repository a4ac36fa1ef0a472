#include <set>

#include "doctest.h"
#include "golib/blob_store.hpp"
#include "golib/crypto.hpp"
#include "golib/errors.hpp"
#include "golib/outbox.hpp"
#include "golib/schema.hpp"
#include "golib/time.hpp"
#include "world.hpp"

using namespace golib;

TEST_CASE("RFC 3339 round trip and offsets") {
    const auto ts = parse_rfc3339("2026-03-02T09:00:00Z");
    CHECK(format_rfc3339(ts) == "2026-03-02T09:00:00Z");
    CHECK(parse_rfc3339("2026-03-02T14:00:00+05:00") == ts);
    CHECK(parse_rfc3339("2026-03-02T08:30:00-00:30") == ts);
    CHECK(parse_rfc3339("2026-03-02T09:00:00.999Z") == ts);
    CHECK(parse_rfc3339("2026-03-02 09:00:00Z") == ts);
    CHECK(format_rfc3339(parse_rfc3339("1970-01-01T00:00:00Z")) == "1970-01-01T00:00:00Z");
    for (const std::string bad : {"", "2026-03-02", "2026-13-02T09:00:00Z", "2026-02-30T09:00:00Z", "2026-03-02T25:00:00Z",
                            "2026-03-02T09:00:00", "2026-03-02_09:00:00Z", "2026-03-02T09:00:00+0500"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_rfc3339(bad), Error);
    }
    CHECK(utc_date(ts) == std::chrono::year{2026} / 3 / 2);
}

TEST_CASE("error codes map injectively to wire codes") {
    std::set<std::string_view> codes;
    for (const auto code : all_error_codes()) {
        const auto info = error_info(code);
        CHECK(codes.insert(info.code).second);
        CHECK(info.status >= 400);
        CHECK(info.status < 600);
    }
    CHECK(error_info(ErrorCode::SoldOut).code == "SOLD_OUT");
    CHECK(error_info(ErrorCode::SoldOut).status == 409);
    CHECK(error_info(ErrorCode::NotAuthorized).status == 403);
    CHECK(error_info(ErrorCode::InvalidToken).status == 401);
    CHECK(error_info(ErrorCode::UnknownRoute).status == 404);
    CHECK(error_info(ErrorCode::MethodNotAllowed).status == 405);
    CHECK(error_info(ErrorCode::ValidationFailed).status == 422);
}

TEST_CASE("crypto helpers") {
    CHECK(crypto::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(crypto::to_hex(std::string("\x00\xff", 2)) == "00ff");
    CHECK(crypto::random_hex(32).size() == 64);
    CHECK(crypto::random_hex(32) != crypto::random_hex(32));
    CHECK(crypto::crc32("123456789") == 0xCBF43926u);
    CHECK(crypto::constant_time_equal("abc", "abc"));
    CHECK_FALSE(crypto::constant_time_equal("abc", "abd"));
    CHECK_FALSE(crypto::constant_time_equal("abc", "ab"));
    // RFC 7914 test vector for PBKDF2-HMAC-SHA256.
    CHECK(crypto::pbkdf2_sha256_hex("passwd", "salt", 1) ==
          "55ac046e56e3089fec1691c22544b605f94185216dde0465e68b9d57c20dacbc");
    for (int i = 0; i < 1000; ++i) CHECK(crypto::random_below(7) < 7u);
}

TEST_CASE("base64 round trip and rejection") {
    for (const std::string raw : std::vector<std::string>{"", "f", "fo", "foo", "foob", "fooba", "foobar", std::string("\0\1\2\xff", 4)}) {
        const auto encoded = crypto::base64_encode(raw);
        CHECK(crypto::base64_decode(encoded) == raw);
    }
    CHECK(crypto::base64_encode("foobar") == "Zm9vYmFy");
    CHECK(crypto::base64_decode("Zm9vYg==") == "foob");
    for (const char* bad : {"Zm9", "Zm9v!mFy", "Zg=a", "=Zm9", "Z===", "Zm9vY==="}) {
        CAPTURE(bad);
        CHECK_FALSE(crypto::base64_decode(bad));
    }
}

TEST_CASE("outbox persists as JSON lines and reloads") {
    testing::TempDir dir;
    const auto path = dir.path() / "outbox.jsonl";
    const auto now = testing::t0();
    {
        Outbox outbox(path);
        outbox.append({"a@x.pk", "s1", "b1", now});
        outbox.append({"b@x.pk", "s2", "b2", now});
        CHECK(outbox.size() == 2);
        CHECK(outbox.messages_to("a@x.pk").size() == 1);
    }
    Outbox reloaded(path);
    CHECK(reloaded.size() == 2);
    CHECK(reloaded.messages().back().subject == "s2");
}

TEST_CASE("blob store is content addressed") {
    testing::TempDir dir;
    BlobStore in_memory;
    BlobStore on_disk(dir.path());
    for (BlobStore* store : {&in_memory, &on_disk}) {
        auto& blobs = *store;
        const auto ref = blobs.put("hello");
        CHECK(ref == "sha256:" + crypto::sha256_hex("hello"));
        CHECK(blobs.put("hello") == ref);
        CHECK(blobs.get(ref) == "hello");
        CHECK(blobs.contains(ref));
        CHECK_FALSE(blobs.get("sha256:" + crypto::sha256_hex("other")));
    }
}

TEST_CASE("documents round trip through JSON") {
    Event e;
    e.id = "evt_1";
    e.kind = EventKind::PrivateSession;
    e.title = "Talk";
    e.host_book_id = "acct_2";
    e.venue = {"Hall", "Street", 25.5, 68.25};
    e.starts_at = testing::t0();
    e.ends_at = testing::t0() + Seconds{3600};
    e.capacity = 1;
    e.price_minor = 5000;
    e.created_by = "acct_2";
    const Json j = e;
    CHECK(j.at("starts_at") == "2026-03-02T09:00:00Z");
    CHECK(j.at("kind") == "PrivateSession");
    const auto back = j.get<Event>();
    CHECK(Json(back) == j);

    UserAccount a;
    a.id = "acct_1";
    a.role = Role::Book;
    const Json ja = a;
    CHECK(ja.at("vaccination").is_null());
    CHECK(ja.get<UserAccount>().role == Role::Book);

    CHECK(parse_provider("easypaisa") == Provider::Easypaisa);
    CHECK(parse_provider("JazzCash") == Provider::JazzCash);
    CHECK_FALSE(parse_provider("visa"));
}
