#include <gtest/gtest.h>

#include <filesystem>
#include <json.hpp>

#include "qubonet/dataset.hpp"
#include "qubonet/error.hpp"
#include "qubonet/model_io.hpp"

using namespace qubonet;

namespace {

CompiledModel paper_model(bool ext = false) {
  NetworkShape s;
  s.first_layer_bias = ext;
  return compile_structured(s, gen_circles({40, 0.1, 9}));
}

}  // namespace

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ModelJson, FieldNames) {
  const auto doc = nlohmann::json::parse(model_to_json(paper_model()));
  for (const char* k : {"shape", "scaler", "layout", "reduction", "qubo", "offset", "counts",
                        "lambda", "path", "hash"}) {
    EXPECT_TRUE(doc.contains(k)) << k;
  }
  EXPECT_EQ(doc["counts"]["abstract_spins"], 21);
  EXPECT_EQ(doc["reduction"].size(), 14u);
}

TEST(ModelJson, RoundTrip) {
  for (bool ext : {false, true}) {
    const auto m = paper_model(ext);
    const auto text = model_to_json(m);
    const auto back = model_from_json(text);
    EXPECT_EQ(back.qubo, m.qubo);
    EXPECT_EQ(back.reduction, m.reduction);
    EXPECT_EQ(back.counts, m.counts);
    EXPECT_EQ(back.lambda, m.lambda);
    EXPECT_EQ(back.offset, m.offset);
    EXPECT_EQ(back.scaler.lo, m.scaler.lo);
    EXPECT_EQ(back.scaler.hi, m.scaler.hi);
    EXPECT_EQ(back.shape.activation.coeffs, m.shape.activation.coeffs);
    EXPECT_EQ(back.layout.total_spins, m.layout.total_spins);
    EXPECT_EQ(model_to_json(back), text);
    EXPECT_EQ(content_hash(back), content_hash(m));
  }
}

TEST(ModelJson, HashIsDeterministicAndSensitive) {
  const auto a = paper_model();
  EXPECT_EQ(content_hash(a), content_hash(paper_model()));
  auto b = a;
  b.qubo.linear[0] += 1e-9;
  EXPECT_NE(content_hash(a), content_hash(b));
}

TEST(ModelJson, TamperedDocumentRejected) {
  auto doc = nlohmann::json::parse(model_to_json(paper_model()));
  doc["lambda"] = 1.0;
  EXPECT_THROW(model_from_json(doc.dump()), ParseError);
  EXPECT_THROW(model_from_json("{not json"), ParseError);
  EXPECT_THROW(model_from_json("{}"), ParseError);
}

TEST(ModelJson, SaveLoad) {
  const auto dir = std::filesystem::temp_directory_path() / "qubonet_model_io";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "model.json").string();
  const auto m = paper_model();
  save_model(m, path);
  EXPECT_EQ(load_model(path).qubo, m.qubo);
  EXPECT_THROW(load_model((dir / "missing.json").string()), IoError);
}
