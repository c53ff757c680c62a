/*
 * Copyright (c) 2026 tsgraph authors.
 *     All rights reserved.
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing,
 *  software distributed under the License is distributed on an "AS
 *  IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either
 *  express or implied.  See the License for the specific language
 *  governing permissions and limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "tsgraph/codec.hpp"
#include "../common/dfcm_reference.hpp"

using namespace tsgraph;
using namespace tsgraph::codec;

TEST_CASE("varint encodes the 7-bit boundary") {
  uint64_t v127[] = {127};
  CHECK(varint_encode(v127) == Bytes{0x7f});
  uint64_t v128[] = {128};
  CHECK(varint_encode(v128) == Bytes{0x80, 0x01});
  uint64_t v0[] = {0};
  CHECK(varint_encode(v0) == Bytes{0x00});
}

TEST_CASE("varint round-trips random values") {
  std::mt19937_64 rng(1);
  std::vector<uint64_t> values;
  for (int i = 0; i < 10000; ++i) values.push_back(rng() >> (rng() % 64));
  Bytes enc = varint_encode(values);
  CHECK(varint_decode(enc) == values);
}

TEST_CASE("varint rejects truncation and overflow") {
  Bytes dangling{0x80};
  size_t pos = 0;
  CHECK_THROWS_AS(varint_read(dangling, pos), TruncatedStream);
  Bytes eleven(11, 0x80);
  pos = 0;
  CHECK_THROWS_AS(varint_read(eleven, pos), CorruptFile);
}

TEST_CASE("zigzag maps small magnitudes to small codes") {
  CHECK(zigzag_encode(0) == 0);
  CHECK(zigzag_encode(-1) == 1);
  CHECK(zigzag_encode(1) == 2);
  CHECK(zigzag_encode(-2) == 3);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000; ++i) {
    int64_t v = static_cast<int64_t>(rng());
    CHECK(zigzag_decode(zigzag_encode(v)) == v);
  }
}

TEST_CASE("delta_ts base and deltas match the definition") {
  uint64_t ts[] = {1000, 1005, 1012};
  DeltaTs enc = delta_ts_encode(ts);
  CHECK(enc.base == 1000);
  CHECK(enc.deltas == Bytes{5, 7});

  uint64_t single[] = {77};
  DeltaTs one = delta_ts_encode(single);
  CHECK(one.base == 77);
  CHECK(one.deltas.empty());
}

TEST_CASE("delta_ts rejects decreasing input") {
  uint64_t bad[] = {5, 4};
  CHECK_THROWS_AS(delta_ts_encode(bad), DecreasingSequence);
  CHECK_THROWS_AS(delta_ts_encode({}), InvalidArgument);
}

TEST_CASE("delta_ts round-trips and meets the size bound") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 20; ++round) {
    size_t n = 1 + rng() % 3000;
    std::vector<uint64_t> ts(n);
    uint64_t t = 1 + (rng() >> 30);
    for (size_t i = 0; i < n; ++i) {
      t += rng() % (uint64_t{1} << 28);
      ts[i] = t;
    }
    Bytes enc = delta_ts_encode_block(ts);
    CHECK(delta_ts_decode_block(enc, n) == ts);
    // n sorted values with deltas < 2^28 fit in 8 + 4(n-1) bytes.
    CHECK(enc.size() <= 8 + 4 * (n - 1));
  }
}

TEST_CASE("delta_ts halves timestamp storage") {
  std::mt19937_64 rng(4);
  size_t n = 10000;
  std::vector<uint64_t> ts(n);
  uint64_t t = 1'700'000'000'000;
  for (size_t i = 0; i < n; ++i) {
    t += 100;
    ts[i] = t;
  }
  Bytes enc = delta_ts_encode_block(ts);
  CHECK(enc.size() <= (n * 8) / 2);
}

TEST_CASE("dfcm constant series costs two bytes per value after warm-up") {
  std::vector<uint64_t> values(64, 0x1234567890abcdefull);
  Bytes enc = dfcm_encode(values);
  // First value is a miss; afterwards FCM predicts exactly, which is one
  // header byte plus the 0x00 sentinel per value.
  CHECK(enc.size() <= 9 + (values.size() - 1) * 2);
  CHECK(dfcm_decode(enc, values.size()) == values);
}

TEST_CASE("dfcm arithmetic series is predicted by the delta table") {
  std::vector<uint64_t> values;
  uint64_t v = 1'000'000;
  for (int i = 0; i < 64; ++i) {
    values.push_back(v);
    v += 4096;
  }
  Bytes enc = dfcm_encode(values);
  CHECK(enc.size() <= 16 + (values.size() - 2) * 2);
  CHECK(dfcm_decode(enc, values.size()) == values);
}

TEST_CASE("dfcm round-trips random doubles bit-exactly") {
  std::mt19937_64 rng(5);
  std::vector<double> values;
  for (int i = 0; i < 10000; ++i)
    values.push_back(std::ldexp(static_cast<double>(rng()), -32));
  Bytes enc = dfcm_encode_doubles(values);
  std::vector<double> dec = dfcm_decode_doubles(enc, values.size());
  REQUIRE(dec.size() == values.size());
  for (size_t i = 0; i < values.size(); ++i)
    CHECK(std::bit_cast<uint64_t>(dec[i]) == std::bit_cast<uint64_t>(values[i]));
}

TEST_CASE("dfcm encoder and decoder states stay identical") {
  std::mt19937_64 rng(6);
  DfcmConfig cfg{10};
  DfcmState enc_state(cfg);
  DfcmState dec_state(cfg);
  for (int i = 0; i < 2000; ++i) {
    uint64_t v = rng() >> (rng() % 48);
    enc_state.update(v);
    dec_state.update(v);
    CHECK(enc_state.state_checksum() == dec_state.state_checksum());
  }
}

TEST_CASE("dfcm matches the independent reference implementation") {
  std::mt19937_64 rng(7);
  std::vector<std::vector<uint64_t>> fixtures;
  fixtures.push_back(std::vector<uint64_t>(100, 42));  // constant
  {
    std::vector<uint64_t> arith;
    for (int i = 0; i < 100; ++i) arith.push_back(1000 + 77 * i);
    fixtures.push_back(arith);
  }
  {
    std::vector<uint64_t> rand;
    for (int i = 0; i < 500; ++i) rand.push_back(rng());
    fixtures.push_back(rand);
  }
  {
    std::vector<uint64_t> doubles;
    for (int i = 0; i < 300; ++i)
      doubles.push_back(std::bit_cast<uint64_t>(std::sin(i * 0.01)));
    fixtures.push_back(doubles);
  }
  {
    std::vector<uint64_t> walk;
    uint64_t v = 1'000'000'000;
    for (int i = 0; i < 400; ++i) {
      v += rng() % 1000;
      walk.push_back(v);
    }
    fixtures.push_back(walk);
  }
  for (const auto& fixture : fixtures) {
    Bytes mine = dfcm_encode(fixture);
    std::vector<uint8_t> ref = testutil::dfcm_reference_encode(fixture);
    CHECK(Bytes(ref.begin(), ref.end()) == mine);
    CHECK(testutil::dfcm_reference_decode(ref, fixture.size()) == fixture);
  }
}

TEST_CASE("dfcm rejects truncated streams") {
  std::vector<uint64_t> values = {1, 2, 3};
  Bytes enc = dfcm_encode(values);
  enc.pop_back();
  CHECK_THROWS_AS(dfcm_decode(enc, 3), TruncatedStream);
}

TEST_CASE("dict encodes first-occurrence order") {
  std::vector<std::string> values = {"a", "b", "a"};
  DictEncoded enc = dict_encode(values);
  CHECK(enc.dictionary == std::vector<std::string>{"a", "b"});
  CHECK(enc.codes == std::vector<uint64_t>{0, 1, 0});
  CHECK(dict_decode(enc) == values);

  CHECK(dict_encode({}).dictionary.empty());
  CHECK(dict_encode({}).codes.empty());

  std::vector<std::string> distinct = {"x", "y", "z"};
  DictEncoded d = dict_encode(distinct);
  CHECK(d.dictionary == distinct);
  CHECK(d.codes == std::vector<uint64_t>{0, 1, 2});
}

TEST_CASE("dict block round-trips arbitrary strings") {
  std::mt19937_64 rng(8);
  std::vector<std::string> values;
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    size_t len = rng() % 12;
    for (size_t j = 0; j < len; ++j)
      s.push_back(static_cast<char>('a' + rng() % 4));
    values.push_back(s);
  }
  Bytes enc = dict_encode_block(values);
  CHECK(dict_decode_block(enc) == values);
  DictEncoded d = dict_encode(values);
  std::set<std::string> uniq(d.dictionary.begin(), d.dictionary.end());
  CHECK(uniq.size() == d.dictionary.size());
  for (uint64_t c : d.codes) CHECK(c < d.dictionary.size());
}

TEST_CASE("general compressor NONE is the identity") {
  std::mt19937_64 rng(9);
  Bytes data(1024);
  for (auto& b : data) b = static_cast<uint8_t>(rng());
  CHECK(general_compress(data, GeneralCodec::kNone) == data);
  CHECK(general_decompress(data, GeneralCodec::kNone, data.size()) == data);
}

TEST_CASE("deflate shrinks zeros and round-trips noise") {
  Bytes zeros(4096, 0);
  Bytes packed = general_compress(zeros, GeneralCodec::kDeflate);
  CHECK(packed.size() < zeros.size());
  CHECK(general_decompress(packed, GeneralCodec::kDeflate, zeros.size()) ==
        zeros);

  std::mt19937_64 rng(10);
  Bytes noise(4096);
  for (auto& b : noise) b = static_cast<uint8_t>(rng());
  Bytes enc = general_compress(noise, GeneralCodec::kDeflate);
  CHECK(general_decompress(enc, GeneralCodec::kDeflate, noise.size()) == noise);
}

TEST_CASE("zstd round-trips when compiled in") {
  if (!general_codec_supported(GeneralCodec::kZstd)) {
    CHECK_THROWS_AS(general_compress(Bytes{1, 2, 3}, GeneralCodec::kZstd),
                    UnsupportedCodec);
    return;
  }
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    Bytes data(rng() % 8192);
    for (auto& b : data) b = static_cast<uint8_t>(rng() % 7);
    Bytes enc = general_compress(data, GeneralCodec::kZstd);
    CHECK(general_decompress(enc, GeneralCodec::kZstd, data.size()) == data);
  }
}

TEST_CASE("unknown codec bytes fail loudly") {
  CHECK_THROWS_AS(column_codec_from_byte(0x06), UnsupportedCodec);
  CHECK_THROWS_AS(general_codec_from_byte(0x03), UnsupportedCodec);
  CHECK_THROWS_AS(general_codec_from_name("snappy"), UnsupportedCodec);
}

TEST_CASE("codec id bytes are pinned") {
  CHECK(static_cast<uint8_t>(ColumnCodec::kNone) == 0x00);
  CHECK(static_cast<uint8_t>(ColumnCodec::kVarint) == 0x01);
  CHECK(static_cast<uint8_t>(ColumnCodec::kZigzagVarint) == 0x02);
  CHECK(static_cast<uint8_t>(ColumnCodec::kDeltaTs) == 0x03);
  CHECK(static_cast<uint8_t>(ColumnCodec::kDfcm) == 0x04);
  CHECK(static_cast<uint8_t>(ColumnCodec::kDict) == 0x05);
  CHECK(static_cast<uint8_t>(GeneralCodec::kNone) == 0x00);
  CHECK(static_cast<uint8_t>(GeneralCodec::kDeflate) == 0x01);
  CHECK(static_cast<uint8_t>(GeneralCodec::kZstd) == 0x02);
}

TEST_CASE("bench compares codecs on a timestamp column") {
  BenchColumn column;
  column.type = "ts";
  uint64_t t = 1'700'000'000'000;
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20000; ++i) {
    t += rng() % 500;
    column.u64s.push_back(t);
  }
  std::vector<BenchSpec> specs = {bench_spec_parse("none"),
                                  bench_spec_parse("delta_ts")};
  auto rows = bench_codecs(column, specs, 64 * 1024);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].ratio < rows[0].ratio);
  CHECK(rows[0].ratio == doctest::Approx(1.0));
}

TEST_CASE("bench shows dictionary wins on repetitive strings") {
  BenchColumn column;
  column.type = "string";
  for (int i = 0; i < 9000; ++i)
    column.strs.push_back(i % 3 == 0 ? "alpha" : (i % 3 == 1 ? "beta" : "gamma"));
  auto rows = bench_codecs(column, std::vector<BenchSpec>{bench_spec_parse("dict")},
                           64 * 1024);
  // Three distinct strings repeated: codes are ~1 byte against 4+len raw.
  CHECK(rows[0].ratio < 0.5);
}

TEST_CASE("bench shows dfcm wins on smooth doubles") {
  BenchColumn column;
  column.type = "double";
  for (int i = 0; i < 20000; ++i) column.doubles.push_back(1000.0 + i);
  auto rows = bench_codecs(
      column, std::vector<BenchSpec>{bench_spec_parse("dfcm")}, 64 * 1024);
  CHECK(rows[0].ratio < 1.0);
}

TEST_CASE("bench rejects unsupported codec names") {
  CHECK_THROWS_AS(bench_spec_parse("lz4"), UnsupportedCodec);
  BenchColumn column;
  column.type = "double";
  column.doubles = {1.0};
  CHECK_THROWS_AS(bench_codecs(column,
                               std::vector<BenchSpec>{bench_spec_parse("dict")},
                               1024),
                  UnsupportedCodec);
}
