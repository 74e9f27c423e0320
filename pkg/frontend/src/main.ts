import { bootstrap } from "./app.js";

const root = document.getElementById("app");
if (root) {
  bootstrap(root, "").catch((err) => {
    root.textContent = `failed to reach the model service: ${err}`;
  });
}
