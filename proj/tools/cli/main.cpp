#include <exception>
#include <iostream>

#include "commands.hpp"
#include "dseqmark/error.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perceptual DCT watermarking with decimal-sequence keys", "dseqmark"};
  app.require_subcommand(1);
  dseqmark::cli::register_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kExitValidation;
  } catch (const dseqmark::Error& e) {
    std::cerr << "dseqmark: " << e.what() << "\n";
    if (e.code() == dseqmark::ErrorCode::Internal) return kExitInternal;
    return dseqmark::is_io_error(e.code()) ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "dseqmark: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
