#include <doctest.h>

#include <random>

#include "policygrade/textprep.hpp"
#include "support/oracles.hpp"

using namespace pg;

TEST_CASE("clean_text golden strings") {
    CHECK(clean_text("<strong>Genetic Information.</strong>") == "genetic information.");
    CHECK(clean_text("Caf\xC3\xA9 Ros\xC3\xA9") == "cafe rose");
    CHECK(clean_text("<li>search results and links, including paid listings (such as Sponsored Links).") ==
          "search results and links, including paid listings such as sponsored links .");
    CHECK(clean_text("Tom &amp; Jerry") == "tom jerry");
    CHECK(clean_text("caf&eacute; &#233; &#x00E9;") == "cafe e e");
    CHECK(clean_text("<script>alert('x')</script>visible<style>p{}</style> text") == "visible text");
    CHECK(clean_text("a<!-- hidden -->b") == "a b");
    CHECK(clean_text("\xE2\x80\x9Cquoted\xE2\x80\x9D \xE2\x80\x94 it\xE2\x80\x99s") == "quoted - it's");
    CHECK(clean_text("") == "");
    CHECK(clean_text("   <br/>  ") == "");
}

TEST_CASE("clean stages") {
    CHECK(strip_tags("<p>one</p><p>two</p>") == " one  two ");
    CHECK(decode_entities("&lt;b&gt; &quot;x&quot; &unknown;") == "<b> \"x\" &unknown;");
    CHECK(fold_to_ascii("\xC3\x85ngstr\xC3\xB6m") == "Angstrom");
}

TEST_CASE("count_words") {
    CHECK(count_words("") == 0);
    CHECK(count_words("  a  b\tc\n") == 3);
}

TEST_CASE("split_paragraphs") {
    const std::vector<std::string> blocks{"hello world", "", "foo"};
    const auto out = split_paragraphs(blocks);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == CleanParagraph{0, "hello world", 2});
    CHECK(out[1] == CleanParagraph{1, "foo", 1});
    CHECK(split_paragraphs({}).empty());
    const std::vector<std::string> one{"a b c d e"};
    CHECK(split_paragraphs(one) == std::vector<CleanParagraph>{{0, "a b c d e", 5}});
}

TEST_CASE("clean invariants over generated markup") {
    std::mt19937_64 rng(1234);
    for (int i = 0; i < 2000; ++i) {
        const std::string x = oracle::random_messy_html(rng);
        const std::string c = clean_text(x);
        CAPTURE(x);
        CHECK(clean_text(c) == c);
        for (char ch : c) {
            CHECK(is_permitted_char(ch));
            CHECK_FALSE((ch >= 'A' && ch <= 'Z'));
            CHECK(ch != '<');
            CHECK(ch != '>');
        }
        CHECK(c.find("  ") == std::string::npos);
        if (!c.empty()) {
            CHECK(c.front() != ' ');
            CHECK(c.back() != ' ');
        }
    }
}

TEST_CASE("document kind names") {
    for (auto k : {DocumentKind::privacy_policy, DocumentKind::terms_of_service, DocumentKind::cookie_policy,
                   DocumentKind::unknown})
        CHECK(parse_document_kind(to_string(k)) == k);
}
