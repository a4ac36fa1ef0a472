// golib: run the API server and perform operator tasks against a data
// directory.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fixture.hpp"
#include "golib/errors.hpp"
#include "golib/platform.hpp"
#include "http_server.hpp"
#include "settings.hpp"

namespace {

using namespace golib;

/// Oldest admin account, or the one with the given email.
Principal acting_admin(Platform& platform, const std::string& email) {
    if (!email.empty()) {
        const auto account = platform.identity.find_by_email(identity::normalize_email(email));
        if (!account || account->role != Role::Admin) throw std::invalid_argument(email + " is not an admin account");
        return Principal{account->id};
    }
    for (const auto& rec : platform.store().query(collections::kAccounts, nullptr, nullptr)) {
        const auto account = rec.payload.get<AccountRecord>().account;
        if (account.role == Role::Admin) return Principal{account.id};
    }
    throw std::invalid_argument("no admin account exists; seed one first");
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"golib: events, bookings and messaging for a community of books and readers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "golib 0.1.0");

    cli::Settings settings;
    app.add_option("--data-dir", settings.data_dir, "Directory holding the journal, snapshot, outbox and blobs")
        ->envname("GOLIB_DATA_DIR")
        ->capture_default_str();
    app.add_option("--otp-ttl", settings.otp_ttl_seconds, "Password-reset code lifetime in seconds")
        ->envname("GOLIB_OTP_TTL_SECONDS");
    app.add_option("--hold-ttl", settings.hold_ttl_seconds, "Unpaid seat hold lifetime in seconds")
        ->envname("GOLIB_HOLD_TTL_SECONDS");
    app.add_option("--clock", settings.clock, "Freeze the clock at this RFC 3339 instant")->envname("GOLIB_CLOCK");

    cli::ServeOptions serve_options;
    long sweep_seconds = serve_options.sweep_interval.count();
    bool quiet = false;
    auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
    serve->add_option("--port", serve_options.port, "TCP port")
        ->envname("GOLIB_PORT")
        ->check(CLI::Range(1, 65535))
        ->capture_default_str();
    serve->add_option("--host", serve_options.host, "Address to bind")->capture_default_str();
    serve->add_option("--sweep-interval", sweep_seconds, "Seconds between lapsed-hold sweeps (0 disables)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    serve->add_flag("--quiet", quiet, "Do not log each request");

    std::string fixture_path;
    auto* seed = app.add_subcommand("seed", "Load accounts, follows, slots and events from a JSON fixture");
    seed->add_option("--fixture", fixture_path, "Fixture file")->required()->check(CLI::ExistingFile);

    std::string request_id, admin_email;
    auto* approve = app.add_subcommand("approve", "Accept a become-a-book request");
    auto* reject = app.add_subcommand("reject", "Reject a become-a-book request");
    for (auto* cmd : {approve, reject}) {
        cmd->add_option("request-id", request_id, "Request id")->required();
        cmd->add_option("--as", admin_email, "Admin email to record as the decider (default: oldest admin)");
    }

    auto* pending = app.add_subcommand("pending", "List pending become-a-book requests");
    auto* export_ledger = app.add_subcommand("export-ledger", "Print the payment ledger, one JSON record per line");

    CLI11_PARSE(app, argc, argv);

    try {
        Platform platform(cli::platform_options(settings));
        if (serve->parsed()) {
            serve_options.sweep_interval = std::chrono::seconds{sweep_seconds};
            serve_options.access_log = !quiet;
            cli::serve(platform, serve_options);
        } else if (seed->parsed()) {
            const auto report = cli::seed_fixture(platform, read_json_file(fixture_path));
            std::cout << report.to_json().dump(2) << '\n';
        } else if (approve->parsed() || reject->parsed()) {
            const auto decision = approve->parsed() ? directory::Decision::Accepted : directory::Decision::Rejected;
            const auto decided = platform.directory.decide_become_book_request(
                acting_admin(platform, admin_email), request_id, decision);
            std::cout << Json(decided).dump(2) << '\n';
        } else if (pending->parsed()) {
            const auto queue = platform.directory.list_requests(acting_admin(platform, {}), RequestState::Pending);
            for (const auto& r : queue) std::cout << Json(r).dump() << '\n';
        } else if (export_ledger->parsed()) {
            std::cout << platform.payments.export_ledger();
        }
    } catch (const Error& e) {
        std::cerr << "golib: " << error_info(e.code()).code << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "golib: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
