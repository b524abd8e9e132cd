#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <echodetect/log.hpp>

int main(int argc, char** argv) {
  // Edge-case fixtures trip the library's warnings on purpose; keep
  // the test output clean.
  echodetect::set_log_level(echodetect::LogLevel::None);
  return doctest::Context(argc, argv).run();
}
