#include <doctest.h>

#include "plugaudit/url.hpp"

using namespace plugaudit;

TEST_CASE("parse_url accepts absolute urls") {
    const auto url = parse_url("https://www.kayak.com/search?x=1");
    REQUIRE(url.has_value());
    CHECK(url->scheme == "https");
    CHECK(url->host == "www.kayak.com");
    CHECK_FALSE(url->port.has_value());
    CHECK(url->path_and_query == "/search?x=1");

    const auto with_port = parse_url("http://127.0.0.1:8080");
    REQUIRE(with_port.has_value());
    CHECK(with_port->port == 8080);
    CHECK(with_port->path_and_query == "/");
    CHECK(with_port->origin() == "http://127.0.0.1:8080");
}

TEST_CASE("parse_url rejects relative and malformed inputs") {
    CHECK_FALSE(parse_url("/relative/path").has_value());
    CHECK_FALSE(parse_url("plugin_spec_url").has_value());
    CHECK_FALSE(parse_url("https://").has_value());
    CHECK_FALSE(parse_url("http://host:notaport/").has_value());
    CHECK_FALSE(parse_url("").has_value());
}

TEST_CASE("registrable_domain folds subdomains") {
    CHECK(registrable_domain("www.kayak.com") == "kayak.com");
    CHECK(registrable_domain("kayak.com") == "kayak.com");
    CHECK(registrable_domain("api.eu.shop.co.uk") == "shop.co.uk");
    CHECK(registrable_domain("pages.user.github.io") == "user.github.io");
    CHECK(registrable_domain("localhost") == "localhost");
    CHECK(registrable_domain("WWW.Example.COM") == "example.com");
}

TEST_CASE("same_registrable_domain compares eTLD+1") {
    CHECK(same_registrable_domain("www.kayak.com", "kayak.com"));
    CHECK_FALSE(same_registrable_domain("a.example", "b.example"));
    CHECK_FALSE(same_registrable_domain("tirabeauty.com", "jiocommerce.io"));
}
