#include <doctest.h>

#include "argstruct/text.hpp"

using namespace argstruct;

TEST_CASE("utf8 round trip") {
    std::string s = "plain ascii";
    CHECK(text::encode_utf8(text::decode_utf8(s)) == s);

    std::string multi = "caf\xC3\xA9 \xE2\x82\xAC x";  // café € x
    auto cps = text::decode_utf8(multi);
    CHECK(cps.size() == 8);  // c a f é space € space x
    CHECK(cps[3] == 0xE9);
    CHECK(cps[5] == 0x20AC);
    CHECK(text::encode_utf8(cps) == multi);
}

TEST_CASE("utf8 invalid bytes become replacement characters") {
    std::string bad = "a\x80 b\xC3";  // stray continuation, truncated sequence
    auto cps = text::decode_utf8(bad);
    REQUIRE(cps.size() == 5);
    CHECK(cps[0] == U'a');
    CHECK(cps[1] == 0xFFFD);
    CHECK(cps[4] == 0xFFFD);
}

TEST_CASE("utf8 rejects overlong and surrogate encodings") {
    std::string overlong = "\xC0\xAF";  // overlong '/'
    auto cps = text::decode_utf8(overlong);
    CHECK(cps[0] == 0xFFFD);
    std::string surrogate = "\xED\xA0\x80";  // U+D800
    cps = text::decode_utf8(surrogate);
    CHECK(cps[0] == 0xFFFD);
}

TEST_CASE("string helpers") {
    CHECK(text::lowercase("AbC tag") == "abc tag");
    CHECK(text::split("a;b;;c", ';') == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(text::split("", ';') == std::vector<std::string>{""});
    CHECK(text::strip("  x y \t") == "x y");
    CHECK(text::join({"a", "b", "c"}, "-") == "a-b-c");
    CHECK(text::starts_with("Arg1:T3", "Arg1:"));
    CHECK(!text::starts_with("Ar", "Arg1:"));
}

TEST_CASE("character classes") {
    CHECK(text::is_space(U' '));
    CHECK(text::is_space(U'\n'));
    CHECK(!text::is_space(U'x'));
    CHECK(text::is_punct(U'.'));
    CHECK(text::is_punct(U','));
    CHECK(text::is_punct(0x2019));  // right single quote
    CHECK(!text::is_punct(U'a'));
}
