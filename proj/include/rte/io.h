#ifndef RTE_IO_H_
#define RTE_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace rte::io {

// Whole file as bytes. Throws IOError.
std::string read_file(const std::filesystem::path &path);

// Replaces the file's contents, creating parent directories. Throws IOError.
void write_file(const std::filesystem::path &path, std::string_view data);

}  // namespace rte::io

#endif  // RTE_IO_H_
