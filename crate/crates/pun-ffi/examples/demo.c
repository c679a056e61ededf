/* Minimal embedding example: load a program, run its properties, evaluate
 * a definition. Build (from the repository root):
 *
 *   cargo build -p pun-ffi
 *   cc crates/pun-ffi/examples/demo.c -Icrates/pun-ffi/include \
 *      target/debug/libpun_ffi.a -lpthread -ldl -lm -o demo
 */
#include <stdio.h>
#include <pun.h>

static const char *SOURCE =
    "double : integer -> integer .\n"
    "double x = x + x .\n"
    "answer : integer .\n"
    "answer = double 21 .\n"
    "property double-is-even n . double n == n + n .\n";

int main(void) {
  PunProgram *program = NULL;
  char *error = NULL;
  if (pun_program_new(SOURCE, &program, &error) != PUN_STATUS_OK) {
    fprintf(stderr, "load failed: %s\n", error ? error : "(no message)");
    pun_string_free(error);
    return 1;
  }

  PunRunConfig config = pun_run_config_default();
  config.seed = 2024;
  char *report = NULL;
  uint32_t failures = 0;
  pun_program_check(program, &config, &report, &failures);
  printf("%s", report);
  printf("failures: %u\n", failures);
  pun_string_free(report);

  char *value = NULL;
  if (pun_program_eval(program, "answer", 100000, &value, &error) == PUN_STATUS_OK) {
    printf("answer = %s\n", value);
    pun_string_free(value);
  }

  pun_program_free(program);
  return failures == 0 ? 0 : 1;
}
