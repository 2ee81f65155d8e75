#include "airylab/experiments.hpp"

int main(int argc, char** argv) {
  return airylab::harness::cli_main(argc, argv);
}
