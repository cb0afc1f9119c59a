#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "hierloc/checkpoint.hpp"
#include "hierloc/errors.hpp"

using namespace hierloc;

namespace {

ParameterStore sample_store() {
  std::mt19937_64 rng(4);
  ParameterStore s;
  s.add("w", gaussian(3, 4, 1.0, rng));
  s.add("anchor", gaussian(5, 3, 1.0, rng), ParamKind::Manifold);
  s.add("b", gaussian(1, 4, 1.0, rng));
  return s;
}

std::filesystem::path tmp(const char* name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(Checkpoint, RoundTripIsBitExact) {
  auto s = sample_store();
  auto path = tmp("hierloc_ckpt_rt.bin");
  save_checkpoint(path, s, {{"seed", 3}});
  auto ck = read_checkpoint(path);
  EXPECT_EQ(ck.config["seed"], 3);
  ASSERT_EQ(ck.tensors.size(), 3u);
  ParameterStore other = sample_store();
  for (std::size_t i = 0; i < other.size(); ++i) other[i].value.setZero();
  load_into(ck, other);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(other[i].value, s[i].value);
    EXPECT_EQ(other[i].kind, s[i].kind);
  }
  std::filesystem::remove(path);
}

TEST(Checkpoint, MismatchesAreRejected) {
  auto s = sample_store();
  auto path = tmp("hierloc_ckpt_mm.bin");
  save_checkpoint(path, s, {});
  auto ck = read_checkpoint(path);

  ParameterStore fewer;
  fewer.add("w", ad::Matrix::Zero(3, 4));
  EXPECT_THROW(load_into(ck, fewer), ContractViolation);

  ParameterStore renamed;
  renamed.add("w", ad::Matrix::Zero(3, 4));
  renamed.add("anchor2", ad::Matrix::Zero(5, 3), ParamKind::Manifold);
  renamed.add("b", ad::Matrix::Zero(1, 4));
  EXPECT_THROW(load_into(ck, renamed), ContractViolation);

  ParameterStore reshaped;
  reshaped.add("w", ad::Matrix::Zero(4, 3));
  reshaped.add("anchor", ad::Matrix::Zero(5, 3), ParamKind::Manifold);
  reshaped.add("b", ad::Matrix::Zero(1, 4));
  EXPECT_THROW(load_into(ck, reshaped), ContractViolation);

  ParameterStore retagged;
  retagged.add("w", ad::Matrix::Zero(3, 4));
  retagged.add("anchor", ad::Matrix::Zero(5, 3));
  retagged.add("b", ad::Matrix::Zero(1, 4));
  EXPECT_THROW(load_into(ck, retagged), ContractViolation);
  std::filesystem::remove(path);
}

TEST(Checkpoint, CorruptFilesAreParseErrors) {
  auto path = tmp("hierloc_ckpt_bad.bin");
  {
    std::ofstream(path, std::ios::binary) << "XXXXjunk";
  }
  EXPECT_THROW(read_checkpoint(path), ParseError);
  save_checkpoint(path, sample_store(), {});
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 9);
  EXPECT_THROW(read_checkpoint(path), ParseError);
  std::filesystem::remove(path);
  EXPECT_THROW(read_checkpoint(path), ParseError);
}
