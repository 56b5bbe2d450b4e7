#ifndef SPIKEATK_DATASET_IO_HPP
#define SPIKEATK_DATASET_IO_HPP

#include <cstdint>
#include <filesystem>

#include "spikeatk/synthetic.hpp"

namespace spikeatk {

// On-disk dataset layout: one CSV event file per sample plus manifest.json
// mapping sample ids to class labels and train/test split.
struct DatasetDir {
  Geometry geometry;
  std::uint32_t timestep_us = 1000;
  int classes = 0;
  SplitDataset data;
};

void write_dataset_dir(const std::filesystem::path& dir,
                       const SplitDataset& data, const Geometry& geometry,
                       int classes, std::uint32_t timestep_us, bool force);

DatasetDir read_dataset_dir(const std::filesystem::path& dir);

}  // namespace spikeatk

#endif  // SPIKEATK_DATASET_IO_HPP
