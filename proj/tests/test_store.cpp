#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "novfp/curve_corpus.hpp"
#include "novfp/rng.hpp"
#include "novfp/store.hpp"
#include "support.hpp"

using namespace novfp;
using namespace novfp::store;
using test_support::read_file;
using test_support::TempDir;
using test_support::write_file;

namespace {

ErrorKind kind_of(const std::filesystem::path& p, bool series = false) {
    try {
        if (series)
            read_series(p);
        else
            read_f32(p);
    } catch (const StoreError& e) {
        return e.kind();
    }
    FAIL("expected a StoreError");
    return ErrorKind::io;
}

}  // namespace

TEST_CASE("768-dim float matrix round-trips bit-exactly") {
    TempDir dir;
    Rng rng(5);
    Float32Matrix m{3, 768, {}};
    for (std::size_t i = 0; i < 3 * 768; ++i) m.data.push_back(static_cast<float>(rng.normal()));
    m.data[7] = -0.0f;
    m.data[8] = std::numeric_limits<float>::denorm_min();
    write_f32(dir / "e.bin", m);
    const auto back = read_f32(dir / "e.bin");
    REQUIRE(back.data.size() == m.data.size());
    CHECK(std::memcmp(back.data.data(), m.data.data(), m.data.size() * sizeof(float)) == 0);
    CHECK(back.rows == 3);
    CHECK(back.dim == 768);
}

TEST_CASE("series round-trips bit-exactly") {
    TempDir dir;
    std::vector<double> v = {0.0, 1.0 / 3.0, 2.0, 1e-300, 0.1 + 0.2};
    write_series(dir / "c.bin", v);
    const auto back = read_series(dir / "c.bin");
    CHECK(std::memcmp(back.data(), v.data(), v.size() * sizeof(double)) == 0);
}

TEST_CASE("header layout is little-endian NVFP") {
    TempDir dir;
    write_f32(dir / "e.bin", {1, 2, {1.0f, 2.0f}});
    const auto bytes = read_file(dir / "e.bin");
    REQUIRE(bytes.size() == 20 + 8 + 4);
    CHECK(bytes.substr(0, 4) == "NVFP");
    CHECK(bytes[4] == 1);
    CHECK(bytes[8] == 1);
    CHECK(bytes[12] == 2);
    // 1.0f = 0x3f800000
    CHECK(static_cast<unsigned char>(bytes[23]) == 0x3f);
}

TEST_CASE("corrupted files give distinct diagnostics") {
    TempDir dir;
    write_f32(dir / "ok.bin", {2, 2, {1, 2, 3, 4}});
    const auto good = read_file(dir / "ok.bin");

    SUBCASE("corrupted header is a checksum error") {
        auto bad = good;
        bad[8] = 9;  // row count
        write_file(dir / "h.bin", bad);
        CHECK(kind_of(dir / "h.bin") == ErrorKind::checksum);
    }
    SUBCASE("flipped payload bit is a checksum error") {
        auto bad = good;
        bad[24] ^= 1;
        write_file(dir / "p.bin", bad);
        CHECK(kind_of(dir / "p.bin") == ErrorKind::checksum);
    }
    SUBCASE("bad magic") {
        auto bad = good;
        bad[0] = 'X';
        write_file(dir / "m.bin", bad);
        CHECK(kind_of(dir / "m.bin") == ErrorKind::bad_magic);
    }
    SUBCASE("truncation") {
        write_file(dir / "t.bin", good.substr(0, good.size() - 6));
        CHECK(kind_of(dir / "t.bin") == ErrorKind::truncated);
        write_file(dir / "t2.bin", good.substr(0, 10));
        CHECK(kind_of(dir / "t2.bin") == ErrorKind::truncated);
    }
    SUBCASE("version mismatch with a valid checksum") {
        write_series(dir / "s.bin", std::vector<double>{1.0, 2.0});
        CHECK(kind_of(dir / "s.bin") == ErrorKind::version_mismatch);
        CHECK(kind_of(dir / "ok.bin", true) == ErrorKind::version_mismatch);
    }
    SUBCASE("missing file") { CHECK(kind_of(dir / "none.bin") == ErrorKind::io); }
}

TEST_CASE("index round-trips and safe names stay distinct") {
    TempDir dir;
    std::map<std::string, std::string> idx{{"a/b", "x.bin"}, {"a_b", "y.bin"}};
    write_index(dir / "index.json", idx);
    CHECK(read_index(dir / "index.json") == idx);
    CHECK(safe_name("a/b") != safe_name("a_b"));
    CHECK(safe_name("a/b").find('/') == std::string::npos);
}

TEST_CASE("curve corpus round-trips and filters jointly") {
    TempDir dir;
    CurveCorpus c;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const std::string author = "au" + std::to_string(a);
            c.books.push_back({author + "/bk" + std::to_string(b), author, "bk", 0, "", true});
            c.curves.emplace_back(static_cast<std::size_t>(10 + 10 * a + b), 0.25 * (a + 1));
            c.books.back().paragraph_count = c.curves.back().size() + 1;
        }
    }
    save_curve_corpus(dir.path(), c);
    CHECK(load_curve_corpus(dir.path()) == c);

    // author 0 keeps only books of length >= 12, one book: dropped at min_books 2
    const auto f = filter_curves(c, 2, 12);
    CHECK(f.size() == 6);
    CHECK(filter_curves(f, 2, 12) == f);
}
