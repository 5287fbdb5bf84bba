#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include <concord/concord.hpp>

#include "support.hpp"

using namespace concord;
using testsupport::TempDir;
using testsupport::thrown_code;

TEST_CASE("factorize assigns dense ids in first-occurrence order") {
  const auto a = factorize(std::vector<std::string>{"a", "a", "b"});
  CHECK(a.assignments() == std::vector<std::uint32_t>{0, 0, 1});
  CHECK(a.num_clusters() == 2);
  CHECK(a.n() == 3);

  const auto b = factorize(std::vector<std::string>{"b", "a", "b"});
  CHECK(b.assignments() == std::vector<std::uint32_t>{0, 1, 0});
  CHECK(b.num_clusters() == 2);

  const auto single = factorize(std::vector<std::string>{"x"});
  CHECK(single.assignments() == std::vector<std::uint32_t>{0});
  CHECK(single.num_clusters() == 1);
}

TEST_CASE("factorize rejects empty input and empty tokens") {
  CHECK(thrown_code([] { factorize(std::vector<std::string>{}); }) == Errc::empty_input);
  try {
    factorize(std::vector<std::string>{"a", "", "b"});
    FAIL("expected MissingLabel");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_label);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("factorize is idempotent on its own output") {
  Xoshiro256pp gen(7);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 1 + gen.below(40);
    const auto labels = testsupport::random_labels(n, 1 + gen.below(6), gen);
    const auto again = factorize(labels.assignments());
    CHECK(again.assignments() == labels.assignments());
    CHECK(again.num_clusters() == labels.num_clusters());
  }
}

TEST_CASE("indices are invariant under relabeling either input") {
  Xoshiro256pp gen(11);
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 4 + gen.below(30);
    const auto c1 = testsupport::random_labels(n, 2 + gen.below(4), gen);
    const auto c2 = testsupport::random_labels(n, 2 + gen.below(4), gen);

    // permute c1's ids with an arbitrary injective map; factorize restores density
    std::vector<std::uint32_t> permuted(c1.assignments());
    for (auto& v : permuted) v = (v * 7 + 3) % 97;
    const auto c1p = factorize(permuted);

    const auto lhs = compare(c1, c2);
    const auto rhs = compare(c1p, c2);
    CHECK(lhs.ri == rhs.ri);
    CHECK(lhs.mri == rhs.mri);
    CHECK(lhs.ari_unnormalized == rhs.ari_unnormalized);
    CHECK(lhs.ari_normalized.ok() == rhs.ari_normalized.ok());
    if (lhs.ari_normalized.ok()) CHECK(lhs.ari_normalized.value == rhs.ari_normalized.value);
    CHECK(lhs.mari.ok() == rhs.mari.ok());
    if (lhs.mari.ok()) CHECK(lhs.mari.value == rhs.mari.value);
  }
}

TEST_CASE("from_assignments validates density") {
  CHECK(thrown_code([] {
          LabelVector::from_assignments({0, 2, 2});
        }) == Errc::invalid_labels);
  CHECK(thrown_code([] { LabelVector::from_assignments({}); }) == Errc::empty_input);
}

TEST_CASE("single-column files read labels one per line") {
  TempDir dir;
  const auto path = dir.write("labels.txt", "1\n1\n2\n");
  const auto labels = read_single_column(path);
  CHECK(labels.n() == 3);
  CHECK(labels.assignments() == std::vector<std::uint32_t>{0, 0, 1});

  const auto with_header = dir.write("header.txt", "cluster\n1\n1\n2\n");
  const auto skipped = read_single_column(with_header, {.delimiter = ',', .skip_header = true});
  CHECK(skipped.n() == 3);

  const auto crlf = dir.write("crlf.txt", "a\r\nb\r\n");
  CHECK(read_single_column(crlf).n() == 2);

  CHECK(thrown_code([&] { read_single_column(dir.path() / "absent.txt"); }) == Errc::io_error);
  const auto empty = dir.write("empty.txt", "");
  CHECK(thrown_code([&] { read_single_column(empty); }) == Errc::empty_input);
  const auto blank = dir.write("blank.txt", "a\n\nb\n");
  CHECK(thrown_code([&] { read_single_column(blank); }) == Errc::missing_label);
}

TEST_CASE("two-column files split on the delimiter") {
  TempDir dir;
  const auto path = dir.write("pairs.csv", "a,x\na,y\n");
  const auto [c1, c2] = read_two_columns(path);
  CHECK(c1.n() == 2);
  CHECK(c2.n() == 2);
  CHECK(c1.assignments() == std::vector<std::uint32_t>{0, 0});
  CHECK(c2.assignments() == std::vector<std::uint32_t>{0, 1});

  const auto tabbed = dir.write("pairs.tsv", "a\tx\nb\ty\n");
  const auto [t1, t2] = read_two_columns(tabbed, {.delimiter = '\t', .skip_header = false});
  CHECK(t1.num_clusters() == 2);

  const auto padded = dir.write("padded.csv", " a , x \na,y\n");
  const auto [p1, p2] = read_two_columns(padded);
  CHECK(p1.assignments() == std::vector<std::uint32_t>{0, 0});
}

TEST_CASE("two-column files report structural errors by row") {
  TempDir dir;
  const auto ragged = dir.write("ragged.csv", "a,x\nb,y\nc\n");
  CHECK(thrown_code([&] { read_two_columns(ragged); }) == Errc::length_mismatch);

  const auto wide = dir.write("wide.csv", "a,x,extra\n");
  try {
    read_two_columns(wide);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }

  const auto hole = dir.write("hole.csv", "a,x\nb,\n");
  CHECK(thrown_code([&] { read_two_columns(hole); }) == Errc::missing_label);
}
